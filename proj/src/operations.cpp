#include "coxkit/operations.hpp"

#include <algorithm>
#include <cmath>

namespace coxkit {

std::optional<PValue> ScaledProduct::compose(const PValue& x, const PValue& y) const {
  return (x * y) / scale_;
}

std::optional<PValue> ScaledProduct::negate(const PValue& x) const { return scale_ - x; }

std::string ScaledProduct::name() const {
  if (scale_.is_exact() && scale_.exact() == 1) return "standard";
  return "scaled:" + scale_.str();
}

ValueTransform ValueTransform::parse(const std::string& name) {
  ValueTransform t;
  if (name == "identity") {
    t.kind = Kind::Identity;
  } else if (name == "square") {
    t.kind = Kind::Square;
  } else if (name == "cube") {
    t.kind = Kind::Cube;
  } else if (name == "double") {
    t.kind = Kind::Scale;
    t.factor = PValue(Rational(2));
  } else if (name.rfind("scale", 0) == 0 && name.size() > 6 && name[5] == '*') {
    t.kind = Kind::Scale;
    t.factor = PValue::parse(name.substr(6));
    if (compare(t.factor, PValue(Rational(0))) != std::partial_ordering::greater)
      throw Error(ErrorKind::BadParams, "scale factor must be positive");
  } else {
    throw Error(ErrorKind::UnknownName, "unknown transform '" + name + "'");
  }
  return t;
}

std::string ValueTransform::name() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::Square: return "square";
    case Kind::Cube: return "cube";
    case Kind::Scale:
      if (factor.is_exact() && factor.exact() == 2) return "double";
      return "scale*" + factor.str();
  }
  return "identity";
}

PValue ValueTransform::forward(const PValue& p) const {
  switch (kind) {
    case Kind::Identity: return p;
    case Kind::Square: return p * p;
    case Kind::Cube: return p * p * p;
    case Kind::Scale: return factor * p;
  }
  return p;
}

double ValueTransform::forward(double p) const { return forward(PValue(p)).approx(); }

PValue ValueTransform::inverse(const PValue& v) const {
  switch (kind) {
    case Kind::Identity: return v;
    case Kind::Square: return coxkit::sqrt(v);
    case Kind::Cube: return coxkit::cbrt(v);
    case Kind::Scale: return v / factor;
  }
  return v;
}

std::optional<PValue> ConjugatedOperations::compose(const PValue& x, const PValue& y) const {
  auto inner = base_->compose(transform_.inverse(x), transform_.inverse(y));
  if (!inner) return std::nullopt;
  return transform_.forward(*inner);
}

std::optional<PValue> ConjugatedOperations::negate(const PValue& x) const {
  auto inner = base_->negate(transform_.inverse(x));
  if (!inner) return std::nullopt;
  return transform_.forward(*inner);
}

std::string ConjugatedOperations::name() const {
  const std::string inner = base_->name();
  if (inner == "standard") return "transform:" + transform_.name();
  return "transform:" + transform_.name() + ":" + inner;
}

TableOperations::TableOperations(std::vector<CompositionEntry> composition, std::vector<NegationEntry> negation,
                                 double tol)
    : composition_(std::move(composition)), negation_(std::move(negation)), tol_(tol) {
  std::stable_sort(composition_.begin(), composition_.end(), [](const auto& a, const auto& b) {
    return std::pair(a.x.approx(), a.y.approx()) < std::pair(b.x.approx(), b.y.approx());
  });
  std::stable_sort(negation_.begin(), negation_.end(),
                   [](const auto& a, const auto& b) { return a.x.approx() < b.x.approx(); });
}

std::optional<PValue> TableOperations::compose(const PValue& x, const PValue& y) const {
  auto it = std::lower_bound(composition_.begin(), composition_.end(), x.approx() - tol_ - 1e-300,
                             [](const CompositionEntry& e, double v) { return e.x.approx() < v; });
  for (; it != composition_.end() && it->x.approx() <= x.approx() + tol_; ++it)
    if (same_value(it->x, x, tol_) && same_value(it->y, y, tol_)) return it->z;
  return std::nullopt;
}

std::optional<PValue> TableOperations::negate(const PValue& x) const {
  auto it = std::lower_bound(negation_.begin(), negation_.end(), x.approx() - tol_ - 1e-300,
                             [](const NegationEntry& e, double v) { return e.x.approx() < v; });
  for (; it != negation_.end() && it->x.approx() <= x.approx() + tol_; ++it)
    if (same_value(it->x, x, tol_)) return it->nx;
  return std::nullopt;
}

std::shared_ptr<const Operations> make_rule(const std::string& name) {
  if (name == "standard") return std::make_shared<ScaledProduct>();
  if (name.rfind("scaled:", 0) == 0) return std::make_shared<ScaledProduct>(PValue::parse(name.substr(7)));
  if (name.rfind("transform:", 0) == 0) {
    const std::string rest = name.substr(10);
    const auto colon = rest.find(':');
    const auto transform = ValueTransform::parse(rest.substr(0, colon));
    auto base = colon == std::string::npos ? make_rule("standard") : make_rule(rest.substr(colon + 1));
    return std::make_shared<ConjugatedOperations>(transform, std::move(base));
  }
  throw Error(ErrorKind::UnknownName, "unknown operation rule '" + name + "'");
}

}  // namespace coxkit
