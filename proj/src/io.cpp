#include "coxkit/io.hpp"

#include <fstream>
#include <sstream>

namespace coxkit {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

PValue parse_value(const Json& v, const std::string& where) {
  if (v.is_string()) return PValue::parse(v.get<std::string>());
  if (v.is_number_integer()) return PValue(Rational(v.get<long long>()));
  if (v.is_number_float()) return PValue(v.get<double>());
  invalid(where + ": value must be a string or number");
}

std::string label_of(const Json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  invalid(where + ": atom labels must be strings or integers");
}

Event parse_event(const AtomSpace& space, const Json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": event must be an array of atom labels");
  Event e = Event::empty(space.size());
  for (const auto& item : j) {
    const std::string label = label_of(item, where);
    const auto idx = space.index_of(label);
    if (!idx) invalid(where + ": unknown atom '" + label + "'");
    e.insert(*idx);
  }
  return e;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) invalid(where + ": missing \"" + key + "\"");
  return j.at(key);
}

}  // namespace

GalleryItem load_model(const Json& j, const std::string& name) {
  if (!j.is_object()) invalid("model must be a JSON object");
  const Json& atoms = field(j, "atoms", "model");
  if (!atoms.is_array() || atoms.empty()) invalid("\"atoms\" must be a nonempty array");
  std::vector<std::string> labels;
  for (const auto& a : atoms) labels.push_back(label_of(a, "atoms"));
  auto space = std::make_shared<const AtomSpace>(std::move(labels));

  std::optional<EventAlgebra> algebra;
  if (j.value("powerset", false)) {
    algebra = build_power_algebra(space);
  } else if (j.contains("events")) {
    std::vector<Event> events;
    for (const auto& e : j.at("events")) events.push_back(parse_event(*space, e, "events"));
    algebra = EventAlgebra::from_events(space, std::move(events));
  } else {
    invalid("model needs \"powerset\": true or an \"events\" list");
  }
  if (!algebra->materialized()) throw Error(ErrorKind::CapExceeded, "event algebra too large to enumerate");

  const std::size_t n = algebra->event_count();
  std::vector<std::optional<PValue>> table(n * n);
  const Json& entries = field(j, "plausibility", "model");
  if (!entries.is_array()) invalid("\"plausibility\" must be an array");
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string where = "plausibility[" + std::to_string(k) + "]";
    const Json& e = entries[k];
    const auto of = algebra->index_of(parse_event(*space, field(e, "of", where), where));
    const auto given = algebra->index_of(parse_event(*space, field(e, "given", where), where));
    if (!of || !given) invalid(where + ": event is not in the algebra");
    if (*given == 0) invalid(where + ": conditioning event is empty");
    auto& slot = table[*of * n + *given];
    if (slot) invalid(where + ": duplicate entry");
    slot = parse_value(field(e, "value", where), where);
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 1; b < n; ++b)
      if (!table[a * n + b]) {
        invalid("missing P(A|B) for event indices A=" + std::to_string(a) + " B=" + std::to_string(b));
      }

  std::shared_ptr<const Operations> ops;
  const bool tables = j.contains("composition") || j.contains("negation");
  if (j.contains("rule") && tables) invalid("give either \"rule\" or explicit tables, not both");
  if (j.contains("rule")) {
    ops = make_rule(field(j, "rule", "model").get<std::string>());
  } else if (tables) {
    std::vector<CompositionEntry> comp;
    std::vector<NegationEntry> neg;
    if (j.contains("composition"))
      for (const auto& e : j.at("composition"))
        comp.push_back({parse_value(field(e, "x", "composition"), "composition"),
                        parse_value(field(e, "y", "composition"), "composition"),
                        parse_value(field(e, "z", "composition"), "composition")});
    if (j.contains("negation"))
      for (const auto& e : j.at("negation"))
        neg.push_back({parse_value(field(e, "x", "negation"), "negation"),
                       parse_value(field(e, "nx", "negation"), "negation")});
    ops = std::make_shared<TableOperations>(std::move(comp), std::move(neg));
  }
  const double tol = j.value("tolerance", kDefaultTolerance);

  GalleryItem item;
  item.name = name;
  item.model = std::make_shared<const PlausibilityModel>(
      std::move(*algebra), [&](std::size_t of, std::size_t given) { return *table[of * n + given]; }, ops, tol);
  if (j.contains("countable")) {
    const Json& c = j.at("countable");
    const PValue ratio = parse_value(field(c, "ratio", "countable"), "countable.ratio");
    if (!ratio.is_exact()) invalid("countable.ratio must be exact");
    CountableSpace space_c = CountableSpace::geometric(ratio.exact());
    if (c.contains("tail")) space_c.tail_base = CountableSpace::parse_tail(c.at("tail").get<std::string>());
    item.countable = space_c;
    item.countable_depth = c.value("depth", std::size_t{20});
  }
  return item;
}

GalleryItem load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    invalid(path.string() + ": " + e.what());
  }
  return load_model(j, path.filename().string());
}

GalleryItem load_source(const std::string& source, const CheckConfig& config) {
  if (source.rfind("gallery:", 0) == 0) return build_gallery(source.substr(8), config);
  return load_model_file(source);
}

Json value_json(const PValue& v) {
  if (v.is_exact()) return v.str();
  return v.approx();
}

Json event_json(const PlausibilityModel& model, std::size_t event) {
  Json out = Json::array();
  for (auto i : model.event(event).members()) out.push_back(model.algebra().space().label(i));
  return out;
}

Json model_to_json(const PlausibilityModel& model, const std::optional<CountableSpace>& countable,
                   std::size_t countable_depth) {
  Json j;
  j["atoms"] = model.algebra().space().labels();
  if (model.algebra().is_power_set()) {
    j["powerset"] = true;
  } else {
    Json events = Json::array();
    for (std::size_t e = 0; e < model.event_count(); ++e) events.push_back(event_json(model, e));
    j["events"] = std::move(events);
  }
  Json entries = Json::array();
  for (std::size_t b = 1; b < model.event_count(); ++b)
    for (std::size_t a = 0; a < model.event_count(); ++a)
      entries.push_back({{"of", event_json(model, a)}, {"given", event_json(model, b)},
                         {"value", value_json(model.value(a, b))}});
  j["plausibility"] = std::move(entries);
  if (const Operations* ops = model.operations()) {
    if (const auto* table = dynamic_cast<const TableOperations*>(ops)) {
      Json comp = Json::array(), neg = Json::array();
      for (const auto& e : table->composition())
        comp.push_back({{"x", value_json(e.x)}, {"y", value_json(e.y)}, {"z", value_json(e.z)}});
      for (const auto& e : table->negation()) neg.push_back({{"x", value_json(e.x)}, {"nx", value_json(e.nx)}});
      j["composition"] = std::move(comp);
      j["negation"] = std::move(neg);
    } else {
      j["rule"] = ops->name();
    }
  }
  if (model.tolerance() != kDefaultTolerance) j["tolerance"] = model.tolerance();
  if (countable)
    j["countable"] = {{"ratio", PValue(countable->ratio).str()},
                      {"tail", countable->tail_text()},
                      {"depth", countable_depth}};
  return j;
}

Json report_to_json(const PlausibilityModel& model, const CheckReport& report, bool timing) {
  Json j = report.to_json(timing);
  for (auto& check : j["checks"]) {
    Json& result = check["result"];
    if (!result.contains("events")) continue;
    Json sets = Json::array();
    for (const auto& e : result["events"]) sets.push_back(model.describe(e.get<std::size_t>()));
    result["event_sets"] = std::move(sets);
  }
  return j;
}

Json isomorphism_to_json(const PlausibilityModel& model, const IsomorphismResult& r) {
  Json j;
  j["route"] = r.route;
  j["identity"] = r.identity;
  j["bottom"] = r.bottom;
  if (r.route == "analytic") {
    Json g;
    g["reference"] = r.reference;
    g["scale"] = r.scale;
    g["nodes"] = r.generator_nodes;
    g["residual"] = r.generator_residual;
    Json samples = Json::array();
    for (const auto& [x, v] : r.generator_samples) samples.push_back({x, v});
    g["samples"] = std::move(samples);
    j["generator"] = std::move(g);
    j["h"] = r.h;
    j["m"] = r.m;
    j["product_residual"] = r.product_residual;
    j["support"] = {{"size", r.support_size}, {"mesh", r.support_mesh}};
  }
  j["sum_rule"] = {{"ok", r.sum_rule.ok},
                   {"functional", value_json(r.sum_rule.functional)},
                   {"complement", value_json(r.sum_rule.complement)},
                   {"pairs", r.sum_rule.pairs},
                   {"exact", r.sum_rule.exact}};
  const auto& k = r.kolmogorov;
  Json kj = {{"k1", k.k1}, {"k1_error", k.k1_error}, {"k2", k.k2}, {"k2_min", k.k2_min}, {"k3", k.k3},
             {"additivity_error", value_json(k.additivity.max_error)}, {"additivity_families", k.additivity.families}};
  if (!k.additivity.note.empty()) kj["additivity_note"] = k.additivity.note;
  j["kolmogorov"] = std::move(kj);
  Json range = Json::array();
  for (std::size_t i = 0; i < model.range().size(); ++i)
    range.push_back({{"plausibility", value_json(model.range()[i])}, {"probability", r.probability[i]}});
  j["range"] = std::move(range);
  j["probability_model"] = model_to_json(to_probability_model(model, r));
  return j;
}

Json counterexample_to_json(const Counterexample& found) {
  Json j;
  j["values"] = found.values;
  j["seed"] = found.seed;
  j["nodes"] = found.nodes;
  Json witness = to_json(found.unconstrained);
  Json sets = Json::array();
  for (auto e : found.unconstrained.events) sets.push_back(found.model->describe(e));
  witness["event_sets"] = std::move(sets);
  j["witness"] = std::move(witness);
  j["structure"] = model_to_json(*found.model);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace coxkit
