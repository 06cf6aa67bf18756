#pragma once

#include "coxkit/counterexample.hpp"
#include "coxkit/gallery.hpp"
#include "coxkit/suite.hpp"

#include <filesystem>

namespace coxkit {

// Model files are JSON:
//   {"atoms": ["1", "2"],
//    "powerset": true,                       or "events": [[], ["1"], ...]
//    "plausibility": [{"of": ["1"], "given": ["1","2"], "value": "1/2"}, ...],
//    "rule": "standard",                     optional, or explicit tables:
//    "composition": [{"x": "1/2", "y": "1/2", "z": "1/4"}, ...],
//    "negation": [{"x": "1/2", "nx": "1/2"}, ...],
//    "countable": {"ratio": "1/2", "tail": "2^-n", "depth": 20}}
// Values are "p/q" strings or integers (exact) or other numbers (float64).
// Every P(A|B) with B nonempty must be listed exactly once.

/// Loads a model file. Throws InvalidInput with the offending entry.
GalleryItem load_model(const Json& j, const std::string& name = "input");
GalleryItem load_model_file(const std::filesystem::path& path);
/// "gallery:<name>" or a file path.
GalleryItem load_source(const std::string& source, const CheckConfig& config = {});

Json value_json(const PValue& v);
Json event_json(const PlausibilityModel& model, std::size_t event);
Json model_to_json(const PlausibilityModel& model, const std::optional<CountableSpace>& countable = std::nullopt,
                   std::size_t countable_depth = 0);

/// Suite report with event indices also spelled out as atom sets.
Json report_to_json(const PlausibilityModel& model, const CheckReport& report, bool timing = false);
Json isomorphism_to_json(const PlausibilityModel& model, const IsomorphismResult& result);
Json counterexample_to_json(const Counterexample& found);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& j);

}  // namespace coxkit
