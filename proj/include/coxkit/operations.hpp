#pragma once

#include "coxkit/pvalue.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace coxkit {

/// Total (or partially tabulated) composition and negation functions attached
/// to a model. The observed table only pins these down where the model
/// produces arguments; the product extension and the isomorphism need them
/// everywhere else too.
class Operations {
 public:
  virtual ~Operations() = default;
  /// x ∘ y, or nullopt where the operation is not defined.
  virtual std::optional<PValue> compose(const PValue& x, const PValue& y) const = 0;
  /// N(x), or nullopt where not defined.
  virtual std::optional<PValue> negate(const PValue& x) const = 0;
  /// Serializable rule name, e.g. "standard", "scaled:2", "transform:square",
  /// or "table" for explicit entries.
  virtual std::string name() const = 0;
};

/// x ∘ y = xy / s and N(x) = s − x; s = 1 is standard probability.
class ScaledProduct final : public Operations {
 public:
  explicit ScaledProduct(PValue scale = PValue(Rational(1))) : scale_(std::move(scale)) {}
  std::optional<PValue> compose(const PValue& x, const PValue& y) const override;
  std::optional<PValue> negate(const PValue& x) const override;
  std::string name() const override;
  const PValue& scale() const noexcept { return scale_; }

 private:
  PValue scale_;
};

/// Strictly increasing value transform F with its inverse.
struct ValueTransform {
  enum class Kind { Identity, Square, Cube, Scale };
  Kind kind = Kind::Identity;
  PValue factor = PValue(Rational(1));

  static ValueTransform parse(const std::string& name);
  std::string name() const;
  PValue forward(const PValue& p) const;
  PValue inverse(const PValue& v) const;
  double forward(double p) const;
};

/// Operations of F∘base: x ∘ y = F(F⁻¹x ∘ F⁻¹y), N(x) = F(N(F⁻¹x)).
class ConjugatedOperations final : public Operations {
 public:
  ConjugatedOperations(ValueTransform transform, std::shared_ptr<const Operations> base)
      : transform_(std::move(transform)), base_(std::move(base)) {}
  std::optional<PValue> compose(const PValue& x, const PValue& y) const override;
  std::optional<PValue> negate(const PValue& x) const override;
  std::string name() const override;

 private:
  ValueTransform transform_;
  std::shared_ptr<const Operations> base_;
};

struct CompositionEntry {
  PValue x, y, z;
};
struct NegationEntry {
  PValue x, nx;
};

/// Explicit finite tables. Lookups match arguments exactly (exact values) or
/// within `tol` (floats).
class TableOperations final : public Operations {
 public:
  TableOperations(std::vector<CompositionEntry> composition, std::vector<NegationEntry> negation,
                  double tol = 1e-9);
  std::optional<PValue> compose(const PValue& x, const PValue& y) const override;
  std::optional<PValue> negate(const PValue& x) const override;
  std::string name() const override { return "table"; }
  const std::vector<CompositionEntry>& composition() const noexcept { return composition_; }
  const std::vector<NegationEntry>& negation() const noexcept { return negation_; }

 private:
  std::vector<CompositionEntry> composition_;
  std::vector<NegationEntry> negation_;
  double tol_;
};

/// Parses a rule name produced by Operations::name() (table rules excluded).
std::shared_ptr<const Operations> make_rule(const std::string& name);

}  // namespace coxkit
