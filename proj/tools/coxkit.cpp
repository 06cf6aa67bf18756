// coxkit: plausibility model checks and the map onto conditional probability.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 input error.

#include "coxkit/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace coxkit;

namespace {

constexpr int kPass = 0, kFail = 1, kInputError = 2;

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    out << text;
  }
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::UnknownName:
    case ErrorKind::BadParams:
    case ErrorKind::CapExceeded: return kInputError;
    default: return kFail;
  }
}

std::size_t find_event(const PlausibilityModel& model, const std::string& labels) {
  const auto& space = model.algebra().space();
  Event e = Event::empty(space.size());
  std::size_t start = 0;
  while (start < labels.size()) {
    auto comma = labels.find(',', start);
    if (comma == std::string::npos) comma = labels.size();
    const std::string label = labels.substr(start, comma - start);
    const auto idx = space.index_of(label);
    if (!idx) throw Error(ErrorKind::InvalidInput, "unknown atom '" + label + "'");
    e.insert(*idx);
    start = comma + 1;
  }
  const auto index = model.algebra().index_of(e);
  if (!index) throw Error(ErrorKind::InvalidInput, "event {" + labels + "} is not in the algebra");
  return *index;
}

Json countable_json(const GalleryItem& item, bool& ok) {
  const auto r = check_countable_additivity(*item.countable, item.countable_depth);
  ok = ok && r.ok;
  return {{"ok", r.ok},
          {"depth", item.countable_depth},
          {"tail", item.countable->tail_text()},
          {"partial_sum", PValue(r.partial_sum).str()},
          {"gap", PValue(r.gap).str()},
          {"bound", PValue(r.bound).str()},
          {"gap_equals_bound", r.gap_equals_bound}};
}

int cmd_check(const std::string& source, const CheckConfig& config, bool timing, const Output& out) {
  const GalleryItem item = load_source(source, config);
  const CheckReport report = run_suite(*item.model, config);
  Json j;
  j["source"] = source;
  j["report"] = report_to_json(*item.model, report, timing);
  bool ok = report.all_pass();
  if (item.product) {
    j["product"] = item.product->report().to_json();
    ok = ok && item.product->report().ok();
  }
  if (item.countable) j["countable"] = countable_json(item, ok);
  out.write(dump(j));
  return ok ? kPass : kFail;
}

int cmd_isomorphize(const std::string& source, const TransformOptions& options, const Output& out) {
  const GalleryItem item = load_source(source, options.config);
  const IsomorphismResult result = cox_transform(*item.model, options);
  Json j;
  j["source"] = source;
  j["isomorphism"] = isomorphism_to_json(*item.model, result);
  bool ok = result.sum_rule.ok && result.kolmogorov.k1 && result.kolmogorov.k2 && result.kolmogorov.k3;
  if (item.countable) j["countable"] = countable_json(item, ok);
  out.write(dump(j));
  return ok ? kPass : kFail;
}

struct TraceOptions {
  std::string csv, event, given;
};

int cmd_extend(const std::string& source, std::size_t n, const TraceOptions& trace, const CheckConfig& config,
               const Output& out) {
  const GalleryItem item = load_source(source, config);
  const ProductStructure product = extend(*item.model, n, config);
  Json j;
  j["source"] = source;
  j["factors"] = n;
  j["product_atoms"] = product.algebra() ? Json(product.algebra()->space().size()) : Json(nullptr);
  j["extension"] = product.report().to_json();
  if (!trace.csv.empty()) {
    const PlausibilityModel& m = *item.model;
    std::size_t c, d;
    if (trace.event.empty() != trace.given.empty())
      throw Error(ErrorKind::BadParams, "--event and --given go together");
    if (trace.event.empty()) {
      const auto pair = intermediate_pair(m);
      if (!pair) throw Error(ErrorKind::PreconditionUnmet, "no P(∅|D) < P(C|D) < P(Ω|D) to trace");
      std::tie(c, d) = *pair;
    } else {
      c = find_event(m, trace.event);
      d = find_event(m, trace.given);
    }
    const auto conv = repeated_event_convergence(m, c, d, config.i_max, config.convergence_tol);
    std::ofstream csv(trace.csv);
    if (!csv) throw Error(ErrorKind::InvalidInput, "cannot write " + trace.csv);
    csv << conv.csv();
    j["convergence"] = {{"event", m.describe(c)},
                        {"given", m.describe(d)},
                        {"strictly_decreasing", conv.strictly_decreasing},
                        {"converges", conv.converges},
                        {"certified_by_tail", conv.certified_by_tail},
                        {"delta", value_json(conv.delta)},
                        {"note", conv.note}};
  }
  out.write(dump(j));
  return kPass;
}

int cmd_gallery(const std::string& name, bool self_test, const CheckConfig& config, const Output& out) {
  if (self_test) {
    Json rows = Json::array();
    bool all = true;
    for (const auto& entry : gallery_catalog()) {
      const GalleryItem item = build_gallery(entry.name, config);
      const CheckReport report = run_suite(*item.model, config);
      bool met;
      if (entry.expected == "pass") {
        met = report.all_pass() && (!item.product || item.product->report().ok());
      } else if (entry.expected == "direct_embedding") {
        const CheckEntry* e = report.find("direct_embedding");
        met = e && e->status == Status::Pass;
      } else {
        const CheckEntry* e = report.find(entry.expected.substr(5));
        met = e && e->status == Status::Fail;
      }
      all = all && met;
      rows.push_back({{"name", entry.name}, {"expected", entry.expected}, {"met", met}});
    }
    out.write(dump(rows));
    return all ? kPass : kFail;
  }
  if (name.empty()) {
    Json rows = Json::array();
    for (const auto& entry : gallery_catalog())
      rows.push_back({{"name", entry.name}, {"description", entry.description}, {"expected", entry.expected}});
    out.write(dump(rows));
    return kPass;
  }
  const GalleryItem item = build_gallery(name, config);
  Json j = model_to_json(*item.model, item.countable, item.countable_depth);
  if (item.product) j["product"] = {{"factors", item.product->factors()}, {"extension", item.product->report().to_json()}};
  out.write(dump(j));
  return kPass;
}

int cmd_counterexample(const CounterexampleOptions& options, const CheckConfig& config, const Output& out) {
  const CounterexampleSearch search = search_counterexample(options, config);
  if (!search.found) {
    out.write(dump({{"values", options.values},
                    {"seed", options.seed},
                    {"found", false},
                    {"nodes", search.nodes},
                    {"space_exhausted", search.space_exhausted},
                    {"max_atoms", options.max_atoms}}));
    return kFail;
  }
  out.write(dump(counterexample_to_json(*search.found)));
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check plausibility models and map them onto conditional probability"};
  app.require_subcommand(1);
  CheckConfig config = CheckConfig::from_environment();
  Output out;
  bool timing = false;
  app.add_option("--out", out.path, "Write the report here instead of stdout");
  app.add_option("--tol", config.tolerance, "Float tolerance (default 1e-9 or COXKIT_TOL)");
  app.add_option("--seed-samples", config.sample_seed, "Seed for sampled checks");

  std::string source;
  auto* check = app.add_subcommand("check", "Run the axiom and lemma checks");
  check->add_option("source", source, "Model file or gallery:<name>")->required();
  check->add_flag("--timing", timing, "Include per-check wall time");

  TransformOptions transform;
  double reference = 0.0;
  auto* iso = app.add_subcommand("isomorphize", "Map the model onto conditional probability");
  iso->add_option("source", source, "Model file or gallery:<name>")->required();
  auto* ref_opt = iso->add_option("--reference", reference, "Value r with g(r) = -1");
  iso->add_option("--mesh", config.mesh, "Support grid mesh");
  iso->add_option("--depth", config.dyadic_depth, "Dyadic halvings for the generator");

  std::size_t factors = 2;
  TraceOptions trace;
  auto* ext = app.add_subcommand("extend", "Build and check the n-fold product");
  ext->add_option("source", source, "Model file or gallery:<name>")->required();
  ext->add_option("--n", factors, "Number of factors")->check(CLI::Range(1, 64));
  ext->add_option("--trace-csv", trace.csv, "Write the repeated-event sequence i,v_i here");
  ext->add_option("--event", trace.event, "Traced event C as comma-separated atoms");
  ext->add_option("--given", trace.given, "Conditioning event D as comma-separated atoms");
  ext->add_option("--i-max", config.i_max, "Length of the traced sequence");

  std::string gallery_name;
  bool self_test = false;
  auto* gal = app.add_subcommand("gallery", "List, emit or self-test the model gallery");
  gal->add_option("name", gallery_name, "Model name; omit to list");
  gal->add_flag("--self-test", self_test, "Check every entry against its documented outcome");

  CounterexampleOptions ce;
  auto* cex = app.add_subcommand("counterexample", "Search a finite structure violating unconstrained associativity");
  cex->add_option("--values", ce.values, "Size K of the value grid {0, 1/(K-1), ..., 1}")->required();
  cex->add_option("--seed", ce.seed, "Search seed")->required();
  cex->add_option("--atoms", ce.max_atoms, "Largest atom count tried");
  cex->add_option("--budget", ce.node_budget, "Node budget");
  cex->add_option("--seconds", ce.seconds, "Time budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*check) return cmd_check(source, config, timing, out);
    if (*iso) {
      transform.config = config;
      if (*ref_opt) transform.reference = reference;
      return cmd_isomorphize(source, transform, out);
    }
    if (*ext) return cmd_extend(source, factors, trace, config, out);
    if (*gal) return cmd_gallery(gallery_name, self_test, config, out);
    if (*cex) return cmd_counterexample(ce, config, out);
  } catch (const Error& e) {
    std::cerr << "coxkit: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "coxkit: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
