#pragma once

#include "coxkit/checks.hpp"

#include <optional>
#include <vector>

namespace coxkit {

/// Base-event indices, one per factor: A₁ × … × Aₙ.
using Rectangle = std::vector<std::size_t>;

/// Consistency findings for an n-fold product, one verdict per re-run axiom.
struct ExtensionReport {
  std::vector<std::pair<std::string, Verdict>> checks;
  std::uint64_t sample_seed = 0;
  bool undetermined = false;  // ∘ undefined somewhere it was needed

  bool ok() const;
  /// First failing check, formatted "name: note".
  std::string first_failure() const;
  Json to_json() const;
};

/// n-fold product (Ωⁿ, 𝔽⊗ⁿ, P∘…∘P). Rectangle values are computed on demand
/// from the base model's operations; the event algebra is built only while
/// the product atom count is within the atom cap.
class ProductStructure {
 public:
  ProductStructure(const PlausibilityModel& base, std::size_t factors,
                   std::size_t atom_cap = kDefaultProductAtomCap);

  const PlausibilityModel& base() const noexcept { return *base_; }
  std::size_t factors() const noexcept { return factors_; }
  /// Product algebra, absent when the atom space would exceed the cap.
  const std::optional<EventAlgebra>& algebra() const noexcept { return algebra_; }

  /// Event of the product space occupied by a rectangle (row-major atoms).
  Event rectangle_event(const Rectangle& r) const;
  Rectangle intersect(const Rectangle& a, const Rectangle& b) const;
  bool is_empty(const Rectangle& r) const;

  /// P(of|given) folded left: ((p₁ ∘ p₂) ∘ p₃) ∘ …
  std::optional<PValue> value(const Rectangle& of, const Rectangle& given) const;
  /// Same, folded right: p₁ ∘ (p₂ ∘ (p₃ ∘ …)).
  std::optional<PValue> value_right(const Rectangle& of, const Rectangle& given) const;

  const ExtensionReport& report() const noexcept { return report_; }
  void set_report(ExtensionReport r) { report_ = std::move(r); }

 private:
  const PlausibilityModel* base_;
  std::size_t factors_;
  std::optional<EventAlgebra> algebra_;
  ExtensionReport report_;
};

/// Re-runs the axiom checks on the n-fold product, restricted to rectangles
/// (sampled with config.sample_seed beyond small sizes).
ExtensionReport examine_extension(const ProductStructure& product, const CheckConfig& config = {});

/// Builds and examines the n-fold product. Throws ExtensionInconsistent when
/// any check fails and Undetermined when ∘ is not available where needed.
/// The returned structure refers to `model`, which must outlive it.
ProductStructure extend(const PlausibilityModel& model, std::size_t n, const CheckConfig& config = {});

/// Unconstrained triples through the 3-fold product: with A× = (A,Ω,Ω),
/// B× = (Ω,B,Ω), C× = (Ω,Ω,C), D× = (D,D,D), compares (x∘y)∘z with x∘(y∘z)
/// for x = P(A|D), y = P(B|D), z = P(C|D). events = {A, B, C, D}.
Verdict check_associativity_unconstrained(const PlausibilityModel& model, const CheckConfig& config = {});

struct ConvergenceResult {
  std::vector<PValue> values;  // v_i = P(C×…×C | D×…×D), i = 1..i_max
  PValue bottom;               // P(∅|D)
  PValue delta;                // limit estimate
  bool strictly_decreasing = true;
  bool converges = false;
  bool certified_by_tail = false;
  std::string note;
  std::string csv() const;
};

/// Repeated-event sequence for C given D. Throws PreconditionUnmet unless
/// P(∅|D) < P(C|D) < P(Ω|D), Undetermined if ∘ is unavailable.
ConvergenceResult repeated_event_convergence(const PlausibilityModel& model, std::size_t c, std::size_t d,
                                             std::size_t i_max = 64, double tol = 1e-12);

struct DensifiedGrid {
  std::vector<double> values;  // sorted, includes bottom and top
  double mesh = 0.0;           // largest gap
  std::size_t rounds = 0;      // extension rounds used
};

/// Closes the observed range under ∘ and N until the largest gap in
/// [P(∅|·), P(Ω|·)] is at most `mesh`. Throws MeshUnreachable for trivial
/// models or when `max_rounds` rounds do not suffice.
DensifiedGrid densified_range(const PlausibilityModel& model, double mesh, std::size_t max_rounds = 64);

}  // namespace coxkit
