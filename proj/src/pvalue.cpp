#include "coxkit/pvalue.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace coxkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ExtensionInconsistent: return "ExtensionInconsistent";
    case ErrorKind::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorKind::MeshUnreachable: return "MeshUnreachable";
    case ErrorKind::NonAssociativeData: return "NonAssociativeData";
    case ErrorKind::DegenerateRange: return "DegenerateRange";
    case ErrorKind::NoFixedPoint: return "NoFixedPoint";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::ExhaustedBudget: return "ExhaustedBudget";
    case ErrorKind::Undetermined: return "Undetermined";
  }
  return "Unknown";
}

std::string PValue::str() const {
  if (exact_) {
    const BigInt num = boost::multiprecision::numerator(*exact_);
    const BigInt den = boost::multiprecision::denominator(*exact_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), approx_);
  if (ec != std::errc{}) return std::to_string(approx_);
  return std::string(buf, end);
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

BigInt parse_int(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return BigInt(std::string(s));
}

}  // namespace

PValue PValue::parse(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
      throw Error(ErrorKind::InvalidInput, "malformed rational '" + std::string(text) + "'");
    const BigInt d = parse_int(den);
    if (d == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
    return PValue(Rational(parse_int(num), d));
  }
  if (is_integer_literal(text)) return PValue(Rational(parse_int(text)));
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    throw Error(ErrorKind::InvalidInput, "malformed value '" + std::string(text) + "'");
  return PValue(value);
}

std::partial_ordering compare(const PValue& a, const PValue& b) {
  if (a.is_exact() && b.is_exact()) {
    if (a.exact() < b.exact()) return std::partial_ordering::less;
    if (a.exact() > b.exact()) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  return a.approx() <=> b.approx();
}

bool same_value(const PValue& a, const PValue& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return std::abs(a.approx() - b.approx()) <= tol;
}

PValue operator+(const PValue& a, const PValue& b) {
  if (a.is_exact() && b.is_exact()) return PValue(Rational(a.exact() + b.exact()));
  return PValue(a.approx() + b.approx());
}

PValue operator-(const PValue& a, const PValue& b) {
  if (a.is_exact() && b.is_exact()) return PValue(Rational(a.exact() - b.exact()));
  return PValue(a.approx() - b.approx());
}

PValue operator*(const PValue& a, const PValue& b) {
  if (a.is_exact() && b.is_exact()) return PValue(Rational(a.exact() * b.exact()));
  return PValue(a.approx() * b.approx());
}

PValue operator/(const PValue& a, const PValue& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.exact() == 0) throw Error(ErrorKind::InvalidInput, "division by zero");
    return PValue(Rational(a.exact() / b.exact()));
  }
  return PValue(a.approx() / b.approx());
}

namespace {

std::optional<BigInt> exact_root(const BigInt& n, unsigned k) {
  if (n < 0) return std::nullopt;
  BigInt r;
  if (k == 2) {
    r = boost::multiprecision::sqrt(n);
  } else {
    // Floor cube root by bisection on [0, n].
    BigInt lo = 0, hi = n + 1;
    while (hi - lo > 1) {
      const BigInt mid = (lo + hi) / 2;
      if (mid * mid * mid <= n) lo = mid; else hi = mid;
    }
    r = lo;
  }
  BigInt p = 1;
  for (unsigned i = 0; i < k; ++i) p *= r;
  if (p == n) return r;
  return std::nullopt;
}

PValue root(const PValue& v, unsigned k) {
  if (v.is_exact() && v.exact() >= 0) {
    const auto num = exact_root(boost::multiprecision::numerator(v.exact()), k);
    const auto den = exact_root(boost::multiprecision::denominator(v.exact()), k);
    if (num && den) return PValue(Rational(*num, *den));
  }
  return PValue(k == 2 ? std::sqrt(v.approx()) : std::cbrt(v.approx()));
}

}  // namespace

PValue sqrt(const PValue& v) { return root(v, 2); }
PValue cbrt(const PValue& v) { return root(v, 3); }

}  // namespace coxkit
