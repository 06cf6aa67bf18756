#include "coxkit/counterexample.hpp"

#include "coxkit/suite.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <random>

namespace coxkit {

namespace {

class Search {
 public:
  Search(const CounterexampleOptions& options, const CheckConfig& config)
      : opt_(options), config_(config), rng_(options.seed), start_(std::chrono::steady_clock::now()) {
    const long long denom = static_cast<long long>(opt_.values) - 1;
    for (long long i = 0; i <= denom; ++i) grid_.emplace_back(Rational(i, denom));
  }

  CounterexampleSearch run() {
    CounterexampleSearch out;
    for (std::size_t n = 2; n <= opt_.max_atoms && !found_; ++n) search_atoms(n);
    out.found = std::move(found_);
    out.nodes = nodes_;
    out.space_exhausted = !out.found;
    if (out.found) out.found->nodes = nodes_;
    return out;
  }

 private:
  struct Cell {
    std::size_t given, meet;
  };

  void tick() {
    ++nodes_;
    if (nodes_ > opt_.node_budget)
      throw Error(ErrorKind::ExhaustedBudget, "node budget of " + std::to_string(opt_.node_budget) + " spent");
    if ((nodes_ & 255) == 0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > opt_.seconds)
      throw Error(ErrorKind::ExhaustedBudget, "time budget of " + std::to_string(opt_.seconds) + " s spent");
  }

  std::vector<unsigned> shuffled() {
    std::vector<unsigned> order(grid_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::shuffle(order.begin(), order.end(), rng_);
    return order;
  }

  void search_atoms(std::size_t n) {
    const std::size_t events = std::size_t{1} << n;
    std::vector<Cell> cells;
    for (std::size_t b = 1; b < events; ++b)
      for (std::size_t c = 1; c < b; ++c)
        if ((c & b) == c) cells.push_back({b, c});
    std::vector<std::vector<unsigned>> orders;
    for (std::size_t i = 0; i < cells.size(); ++i) orders.push_back(shuffled());
    // val[given * events + meet] = grid index of P(meet|given)
    std::vector<int> val(events * events, -1);
    for (std::size_t b = 1; b < events; ++b) {
      val[b * events] = 0;
      val[b * events + b] = static_cast<int>(grid_.size() - 1);
    }
    std::function<void(std::size_t)> assign = [&](std::size_t k) {
      if (found_) return;
      if (k == cells.size()) {
        examine(n, val);
        return;
      }
      const auto [b, c] = cells[k];
      for (unsigned v : orders[k]) {
        bool monotone = true;
        // Subsets of c within b were assigned earlier (smaller masks).
        for (std::size_t s = (c - 1) & c; monotone; s = (s - 1) & c) {
          if (val[b * events + s] > static_cast<int>(v)) monotone = false;
          if (s == 0) break;
        }
        if (!monotone) continue;
        val[b * events + c] = static_cast<int>(v);
        assign(k + 1);
        val[b * events + c] = -1;
        if (found_) return;
      }
    };
    assign(0);
  }

  void examine(std::size_t n, const std::vector<int>& val) {
    tick();
    const std::size_t events = std::size_t{1} << n;
    auto space = std::make_shared<const AtomSpace>(AtomSpace::numbered(n));
    PlausibilityModel model(build_power_algebra(space), [&](std::size_t of, std::size_t given) {
      return grid_[static_cast<std::size_t>(val[given * events + (of & given)])];
    });
    if (classify(model) != Classification::General) return;
    if (!check_inclusion_monotonicity(model).ok) return;
    const auto comp = infer_composition(model, config_.enumeration_budget, config_.sample_seed);
    const auto neg = infer_negation(model);
    if (!comp.ok() || !neg.ok()) return;
    if (!check_composition_monotonicity(comp.table, model).ok || !check_cancellativity(comp.table, model).ok ||
        !find_identity(comp.table, model).ok || !check_associativity_constrained(comp.table, model, config_).ok)
      return;
    complete(model, comp.table, neg.map);
  }

  std::size_t grid_index(const PValue& v) const {
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (compare(grid_[i], v) == 0) return i;
    throw Error(ErrorKind::InvalidInput, "value " + v.str() + " outside the search grid");
  }

  void complete(const PlausibilityModel& model, const CompositionTable& table, const NegationMap& negation) {
    const std::size_t k = grid_.size();
    std::vector<int> c(k * k, -1);
    auto at = [&](std::size_t i, std::size_t j) -> int& { return c[i * k + j]; };
    for (std::size_t i = 0; i < k; ++i) {
      at(0, i) = at(i, 0) = 0;
      at(k - 1, i) = at(i, k - 1) = static_cast<int>(i);
    }
    at(0, k - 1) = at(k - 1, 0) = 0;
    for (const auto& [key, entry] : table.sorted()) {
      const std::size_t x = grid_index(model.range()[key.first]), y = grid_index(model.range()[key.second]);
      const int z = static_cast<int>(grid_index(model.range()[entry.z]));
      if (at(x, y) >= 0 && at(x, y) != z) return;
      at(x, y) = z;
    }
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < k * k; ++i)
      if (c[i] < 0) free.push_back(i);
    std::vector<std::vector<unsigned>> orders;
    for (std::size_t i = 0; i < free.size(); ++i) orders.push_back(shuffled());

    std::vector<NegationEntry> neg;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t image = k - 1 - i;
      if (auto id = model.find_value(grid_[i]))
        if (auto nx = negation.lookup(*id)) image = grid_index(model.range()[*nx]);
      neg.push_back({grid_[i], grid_[image]});
    }

    std::function<void(std::size_t)> fill = [&](std::size_t f) {
      if (found_) return;
      if (f == free.size()) {
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j)
            if ((i > 0 && at(i - 1, j) > at(i, j)) || (j > 0 && at(i, j - 1) > at(i, j))) return;
        try_completion(model, c, neg);
        return;
      }
      const std::size_t i = free[f] / k, j = free[f] % k;
      for (unsigned v : orders[f]) {
        const int vi = static_cast<int>(v);
        if ((i > 0 && at(i - 1, j) > vi) || (j > 0 && at(i, j - 1) > vi)) continue;
        at(i, j) = vi;
        fill(f + 1);
        at(i, j) = -1;
        if (found_) return;
      }
    };
    fill(0);
  }

  void try_completion(const PlausibilityModel& model, const std::vector<int>& c, const std::vector<NegationEntry>& neg) {
    tick();
    const std::size_t k = grid_.size();
    std::vector<CompositionEntry> entries;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        entries.push_back({grid_[i], grid_[j], grid_[static_cast<std::size_t>(c[i * k + j])]});
    auto ops = std::make_shared<TableOperations>(entries, neg);
    auto completed = std::make_shared<const PlausibilityModel>(model.with_operations(ops));
    const Verdict v = check_associativity_unconstrained(*completed, config_);
    if (v.ok) return;
    const CheckReport report = run_suite(*completed, config_);
    for (const char* base : {"algebra_closure", "inclusion_monotonicity", "decomposability", "negation",
                             "composition_monotonicity", "cancellativity", "identity", "constrained_associativity"}) {
      const CheckEntry* e = report.find(base);
      if (!e || e->status != Status::Pass) return;
    }
    Counterexample ce;
    ce.model = std::move(completed);
    ce.completion = std::move(entries);
    ce.negation = neg;
    ce.unconstrained = v;
    ce.seed = opt_.seed;
    ce.values = opt_.values;
    found_ = std::move(ce);
  }

  const CounterexampleOptions& opt_;
  const CheckConfig& config_;
  std::mt19937_64 rng_;
  std::chrono::steady_clock::time_point start_;
  std::vector<PValue> grid_;
  std::size_t nodes_ = 0;
  std::optional<Counterexample> found_;
};

}  // namespace

CounterexampleSearch search_counterexample(const CounterexampleOptions& options, const CheckConfig& config) {
  if (options.max_atoms > 6) throw Error(ErrorKind::BadParams, "max_atoms must be at most 6");
  // Fewer than two values cannot separate P(∅|B) from P(Ω|B).
  if (options.values < 2) return CounterexampleSearch{std::nullopt, 0, true};
  return Search(options, config).run();
}

}  // namespace coxkit
