#pragma once

#include "coxkit/isomorphism.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace coxkit {

/// P(A|B) = μ(A∩B)/μ(B) on the power set of masses.size() atoms.
PlausibilityModel measure_model(const std::vector<PValue>& masses,
                                std::shared_ptr<const Operations> ops = std::make_shared<ScaledProduct>(),
                                double tol = kDefaultTolerance);

/// Values F(P(A|B)) with the conjugated operations F∘(base ops).
PlausibilityModel transform_model(const PlausibilityModel& model, const ValueTransform& transform);

/// Named model. `product` is set for product structures (dice_pair), in which
/// case `model` is the base it refers to; `countable` for geometric spaces.
struct GalleryItem {
  std::string name;
  std::shared_ptr<const PlausibilityModel> model;
  std::shared_ptr<const ProductStructure> product;
  std::optional<CountableSpace> countable;
  std::size_t countable_depth = 0;
};

struct GalleryEntry {
  std::string name;
  std::string description;
  /// "pass", "direct_embedding" or "fail:<check>".
  std::string expected;
};

/// Documented models with their expected outcome under run_suite.
const std::vector<GalleryEntry>& gallery_catalog();

/// Builds a gallery model by name. Parameterized forms:
///   uniform:N, transform:F:BASE, perturbed:BASE:DELTA, geometric:DEPTH[:RATIO],
///   counterexample:K:SEED.
/// Throws UnknownName or BadParams.
GalleryItem build_gallery(const std::string& name, const CheckConfig& config = {});

}  // namespace coxkit
