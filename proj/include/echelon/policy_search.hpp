#pragma once

// Evolution-strategy policy search over scalarised subproblems: the
// weighted-sum baseline and the decomposition solver with weight adaptation
// and a shared candidate pool.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "echelon/demand.hpp"
#include "echelon/env.hpp"
#include "echelon/parallel.hpp"
#include "echelon/pareto.hpp"
#include "echelon/policy.hpp"
#include "echelon/rng.hpp"

namespace echelon {

struct SearchConfig {
  double discount = 0.99;
  int es_population = 16;
  double es_step = 0.1;
  double es_step_decay = 0.999;
  int iterations = 120;  // ES iterations per subproblem
  int eval_episodes = 5;
  bool psa_enabled = false;
  double psa_delta = 1.05;
  bool shared_pool_enabled = false;
  int exchange_interval = 12;
  int population_size = 6;
  int neighbourhood_size = 1;
  std::vector<std::size_t> hidden{32};
  int bounds_iterations = 10;  // ES iterations per objective when estimating bounds
  int update_passes = 10;      // accepted for config compatibility; the ES has no use for it
  std::vector<WeightVector> initial_weights;  // overrides population_size when set
  std::optional<NormalisationBounds> bounds;  // computed from the seed when absent
  std::uint64_t seed = 0;

  void validate() const {
    if (!(discount > 0.0 && discount <= 1.0)) throw std::invalid_argument("search: discount must lie in (0, 1]");
    if (es_population < 1) throw std::invalid_argument("search: es_population must be positive");
    if (!(es_step > 0.0)) throw std::invalid_argument("search: es_step must be positive");
    if (iterations < 0) throw std::invalid_argument("search: iterations must be non-negative");
    if (eval_episodes < 1) throw std::invalid_argument("search: eval_episodes must be positive");
    if (!(psa_delta > 1.0)) throw std::invalid_argument("search: psa_delta must exceed 1");
    if (exchange_interval < 1) throw std::invalid_argument("search: exchange_interval must be positive");
    if (population_size < 1 && initial_weights.empty()) throw std::invalid_argument("search: population_size must be positive");
    if (neighbourhood_size < 0) throw std::invalid_argument("search: neighbourhood_size must be non-negative");
    if (bounds_iterations < 0) throw std::invalid_argument("search: bounds_iterations must be non-negative");
    if (bounds && !bounds->valid()) throw std::invalid_argument("search: bounds must have min < max");
  }
};

/// One evaluated parameter vector. Objective vectors are means over the
/// evaluation traces.
struct CandidateEval {
  std::vector<double> parameters;
  ObjectiveVector discounted;  // penalised, discounted: drives improvement
  ObjectiveVector raw;         // undiscounted raw totals: what the archive stores
  std::vector<ObjectiveVector> episode_raw;
  double violation = 0.0;
  bool feasible = false;
};

/// Scenario, traces and network shape shared by every evaluation in a run.
class PolicyEvaluator {
 public:
  PolicyEvaluator(const ScenarioConfig& cfg, const SearchConfig& search, std::vector<DemandTrace> traces)
      : env_(cfg), shape_(policy_shape(cfg, search.hidden)), discount_(search.discount), traces_(std::move(traces)) {
    if (traces_.empty()) throw std::invalid_argument("policy evaluation needs at least one demand trace");
  }

  const Environment& env() const { return env_; }
  const PolicyShape& shape() const { return shape_; }
  const std::vector<DemandTrace>& traces() const { return traces_; }

  EpisodeResult episode(const Policy& policy, const DemandTrace& trace, bool keep_log) const {
    const ScenarioConfig& cfg = env_.config();
    return rollout(env_, trace, [&](const std::vector<double>& obs, int) { return act(policy, obs, cfg); }, discount_,
                   keep_log);
  }

  CandidateEval evaluate(std::vector<double> parameters) const {
    CandidateEval c;
    const Policy policy{shape_, std::move(parameters)};
    for (const auto& trace : traces_) {
      const EpisodeResult ep = episode(policy, trace, false);
      c.discounted += ep.discounted;
      c.raw += ep.totals;
      c.episode_raw.push_back(ep.totals);
      c.violation += ep.violation;
    }
    const double inv = 1.0 / static_cast<double>(traces_.size());
    c.discounted *= inv;
    c.raw *= inv;
    c.violation *= inv;
    c.feasible = c.violation == 0.0;
    c.parameters = policy.parameters;
    return c;
  }

 private:
  Environment env_;
  PolicyShape shape_;
  double discount_;
  std::vector<DemandTrace> traces_;
};

/// Fixed evaluation traces for a run; every subproblem sees the same ones.
inline std::vector<DemandTrace> evaluation_traces(const ScenarioConfig& cfg, const SearchConfig& search) {
  std::vector<DemandTrace> traces;
  for (int e = 0; e < search.eval_episodes; ++e)
    traces.push_back(sample_trace(cfg, derive_seed(search.seed, {stream::eval_trace, static_cast<std::uint64_t>(e)})));
  return traces;
}

/// State of one (1, lambda)-ES with greedy acceptance.
struct EsState {
  CandidateEval incumbent;
  double sigma = 0.1;
  Rng rng{0};
  int iterations = 0;
};

inline EsState es_start(const PolicyEvaluator& ev, const SearchConfig& search, Rng init_rng, Rng es_rng) {
  EsState s{ev.evaluate(Policy::random(ev.shape(), init_rng).parameters), search.es_step, es_rng, 0};
  return s;
}

/// One ES iteration: lambda Gaussian perturbations of the incumbent; the best
/// replaces it only if strictly better under (w, bounds). Every evaluated
/// candidate is appended to `seen` when given.
inline void es_iterate(EsState& s, const PolicyEvaluator& ev, const WeightVector& w, const NormalisationBounds& bounds,
                       const SearchConfig& search, int jobs, std::vector<CandidateEval>* seen) {
  const std::size_t lambda = static_cast<std::size_t>(search.es_population);
  const std::size_t n = s.incumbent.parameters.size();
  std::vector<std::vector<double>> params(lambda, s.incumbent.parameters);
  for (auto& p : params)
    for (std::size_t i = 0; i < n; ++i) p[i] += s.sigma * s.rng.normal();
  std::vector<CandidateEval> evals(lambda);
  parallel_for(lambda, jobs, [&](std::size_t k) { evals[k] = ev.evaluate(std::move(params[k])); });

  std::size_t best = 0;
  double best_fit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lambda; ++k) {
    const double f = scalarise(evals[k].discounted, w, bounds);
    if (f > best_fit) best_fit = f, best = k;
  }
  if (best_fit > scalarise(s.incumbent.discounted, w, bounds)) s.incumbent = evals[best];
  s.sigma *= search.es_step_decay;
  ++s.iterations;
  if (seen)
    for (auto& e : evals) seen->push_back(std::move(e));
}

/// Runs `budget` ES iterations from `policy` and returns the incumbent.
inline Policy es_improve(const Policy& policy, const WeightVector& w, const PolicyEvaluator& ev,
                         const NormalisationBounds& bounds, const SearchConfig& search, int budget, Rng rng,
                         int jobs = 1) {
  EsState s{ev.evaluate(policy.parameters), search.es_step, rng, 0};
  for (int i = 0; i < budget; ++i) es_iterate(s, ev, w, bounds, search, jobs, nullptr);
  return {ev.shape(), s.incumbent.parameters};
}

inline WeightVector unit_weight(std::size_t b) {
  WeightVector w(kNumObjectives, 0.0);
  w[b] = 1.0;
  return w;
}

/// Everything the bounds estimate saw: per unit-weight run, every evaluated
/// candidate in order (the first is the random starting policy).
struct BoundsProbe {
  NormalisationBounds bounds;
  std::vector<std::vector<CandidateEval>> per_objective;
  std::vector<CandidateEval> final_incumbents;
};

/// Normalisation bounds anchored on the scenario's reference point. The lower
/// end is the reference point, or any lower value reached by a feasible probe
/// episode. Emission and SL inequality are never positive, so their upper end
/// is 0. The profit ceiling comes from one short ES run per unit weight, as
/// the highest raw profit of any rollout plus 5% of the span.
/// Raw totals of infeasible rollouts are not used for the lower ends; early
/// probe policies are infeasible and their totals say little about the
/// feasible region.
inline BoundsProbe probe_bounds(const ScenarioConfig& cfg, const SearchConfig& search, int jobs = 1) {
  search.validate();
  const PolicyEvaluator ev(cfg, search, evaluation_traces(cfg, search));
  const auto identity = NormalisationBounds::identity(kNumObjectives);
  BoundsProbe probe;
  probe.per_objective.resize(kNumObjectives);
  probe.final_incumbents.resize(kNumObjectives);
  parallel_for(kNumObjectives, jobs, [&](std::size_t b) {
    Rng init(derive_seed(search.seed, {stream::bounds, b, 0}));
    Rng es(derive_seed(search.seed, {stream::bounds, b, 1}));
    EsState s = es_start(ev, search, init, es);
    probe.per_objective[b].push_back(s.incumbent);
    for (int i = 0; i < search.bounds_iterations; ++i)
      es_iterate(s, ev, unit_weight(b), identity, search, 1, &probe.per_objective[b]);
    probe.final_incumbents[b] = s.incumbent;
  });
  NormalisationBounds& nb = probe.bounds;
  nb.min = cfg.reference_point.to_point();
  nb.max = {-INFINITY, 0.0, 0.0};
  for (const auto& evals : probe.per_objective)
    for (const auto& c : evals)
      for (const auto& r : c.episode_raw) {
        nb.max[0] = std::max(nb.max[0], r.profit);
        if (c.feasible)
          for (std::size_t b = 0; b < kNumObjectives; ++b) nb.min[b] = std::min(nb.min[b], r[b]);
      }
  const double span = nb.max[0] - nb.min[0];
  if (span > 0.0) nb.max[0] += 0.05 * span;
  else nb.max[0] = nb.min[0] + std::max(1.0, 0.05 * std::fabs(nb.min[0]));
  for (std::size_t b = 1; b < kNumObjectives; ++b)
    if (!(nb.max[b] > nb.min[b])) nb.min[b] = nb.max[b] - 1.0;
  return probe;
}

inline NormalisationBounds compute_bounds(const ScenarioConfig& cfg, const SearchConfig& search, int jobs = 1) {
  return probe_bounds(cfg, search, jobs).bounds;
}

/// Weighted-Pareto-simulated-annealing nudge: each weight component grows by
/// delta where x is at least as good as its nearest archive neighbour and
/// shrinks otherwise, then the vector is renormalised.
inline WeightVector psa_adapt(const WeightVector& w, const ObjectiveVector& fx, const std::vector<Point>& archive,
                              const NormalisationBounds& bounds, double delta) {
  const Point x = fx.to_point();
  const Point xn = bounds.normalise(x);
  const Point* nearest = nullptr;
  double best = INFINITY;
  for (const auto& p : archive) {
    if (p == x) continue;
    const Point pn = bounds.normalise(p);
    double d2 = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b) d2 += (xn[b] - pn[b]) * (xn[b] - pn[b]);
    if (d2 < best) best = d2, nearest = &p;
  }
  if (nearest == nullptr) return w;
  WeightVector out = w;
  double total = 0.0;
  for (std::size_t b = 0; b < out.size(); ++b) {
    out[b] = x[b] >= (*nearest)[b] ? out[b] * delta : out[b] / delta;
    total += out[b];
  }
  for (auto& v : out) v /= total;
  return out;
}

/// Initial weights: explicit ones if given, else the Das-Dennis lattice with
/// exactly population_size members (equal weights for a population of one).
inline std::vector<WeightVector> initial_weights(const SearchConfig& search) {
  if (!search.initial_weights.empty()) return search.initial_weights;
  const auto n = static_cast<std::size_t>(search.population_size);
  if (n == 1) return {WeightVector(kNumObjectives, 1.0 / static_cast<double>(kNumObjectives))};
  for (std::size_t h = 1;; ++h) {
    const std::size_t count = (h + 1) * (h + 2) / 2;
    if (count == n) return das_dennis(kNumObjectives, h);
    if (count > n)
      throw std::invalid_argument("population_size " + std::to_string(n) +
                                  " is not a Das-Dennis lattice size (3, 6, 10, 15, 21, ...); set initial_weights");
  }
}

/// Indices of the k weights nearest to weights[i] (Euclidean, ties by index).
inline std::vector<std::size_t> neighbourhood(const std::vector<WeightVector>& weights, std::size_t i, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (j == i) continue;
    double s = 0.0;
    for (std::size_t b = 0; b < weights[i].size(); ++b) s += (weights[i][b] - weights[j][b]) * (weights[i][b] - weights[j][b]);
    d.emplace_back(s, j);
  }
  std::sort(d.begin(), d.end());
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < std::min(k, d.size()); ++r) out.push_back(d[r].second);
  return out;
}

struct SubProblem {
  WeightVector weight;
  std::vector<std::size_t> neighbourhood;
  EsState es;

  double best_scalarised(const NormalisationBounds& bounds) const { return scalarise(es.incumbent.discounted, weight, bounds); }
};

inline SubProblem make_subproblem(const PolicyEvaluator& ev, const SearchConfig& search, std::size_t k, WeightVector w) {
  Rng init(derive_seed(search.seed, {stream::policy_init, k}));
  Rng es(derive_seed(search.seed, {stream::subproblem, k}));
  return {std::move(w), {}, es_start(ev, search, init, es)};
}

struct SearchHistoryRow {
  int round = 0;
  std::int64_t evaluations = 0;  // candidate evaluations so far, all subproblems
  double hypervolume = 0.0;
  std::optional<double> sparsity;
  std::optional<double> eum;
  std::size_t archive_size = 0;
  std::size_t adoptions = 0;  // pool adoptions this round
};

/// A final policy with the objective vectors of its evaluation.
struct SolutionRecord {
  std::int64_t id = 0;
  WeightVector weight;
  CandidateEval eval;
};

struct BaselineResult {
  Front front;  // feasible final policies, filtered; ids index `solutions`
  std::vector<SolutionRecord> solutions;
  std::vector<SearchHistoryRow> history;
  NormalisationBounds bounds;
};

struct SearchOptions {
  int jobs = 1;
  std::vector<WeightVector> eum_weights;
  std::function<void(const SearchHistoryRow&)> on_round;
};

inline NormalisationBounds resolve_bounds(const ScenarioConfig& cfg, const SearchConfig& search, int jobs) {
  return search.bounds ? *search.bounds : compute_bounds(cfg, search, jobs);
}

/// Independent ES runs, one per weight; the front holds the non-dominated
/// feasible final policies.
inline BaselineResult run_scalarised_baseline(const ScenarioConfig& cfg, const SearchConfig& search,
                                              std::vector<WeightVector> weights, const SearchOptions& opts = {}) {
  search.validate();
  if (weights.empty()) throw std::invalid_argument("scalarised baseline needs at least one weight");
  BaselineResult res;
  res.bounds = resolve_bounds(cfg, search, opts.jobs);
  const PolicyEvaluator ev(cfg, search, evaluation_traces(cfg, search));
  std::vector<SolutionRecord> sols(weights.size());
  parallel_for(weights.size(), opts.jobs, [&](std::size_t k) {
    SubProblem sp = make_subproblem(ev, search, k, weights[k]);
    for (int i = 0; i < search.iterations; ++i) es_iterate(sp.es, ev, sp.weight, res.bounds, search, 1, nullptr);
    sols[k] = {static_cast<std::int64_t>(k), weights[k], std::move(sp.es.incumbent)};
  });
  const Point reference = cfg.reference_point.to_point();
  const std::int64_t per_weight = 1 + static_cast<std::int64_t>(search.iterations) * search.es_population;
  Front feasible;
  for (std::size_t k = 0; k < sols.size(); ++k) {
    if (sols[k].eval.feasible) feasible.push_back(sols[k].eval.raw.to_point(), sols[k].id);
    const Front so_far = pareto_filter(feasible);
    SearchHistoryRow row;
    row.round = static_cast<int>(k + 1);
    row.evaluations = per_weight * static_cast<std::int64_t>(k + 1);
    const IndicatorSnapshot snap = indicator_snapshot(so_far.points, reference, opts.eum_weights);
    row.hypervolume = snap.hypervolume;
    row.sparsity = snap.sparsity;
    row.eum = snap.eum;
    row.archive_size = so_far.size();
    res.history.push_back(row);
    if (opts.on_round) opts.on_round(row);
  }
  res.front = pareto_filter(feasible);
  res.solutions = std::move(sols);
  return res;
}

/// Mutable state of the decomposition solver between rounds.
struct MorldState {
  std::vector<SubProblem> subs;
  ParetoArchive archive;
  std::map<std::int64_t, CandidateEval> archive_members;
  NormalisationBounds bounds;
  std::int64_t next_id = 0;
  std::int64_t evaluations = 0;
  int round = 0;
  std::vector<std::vector<CandidateEval>> pending;  // initial incumbents, offered in the first round
};

inline MorldState morld_init(const PolicyEvaluator& ev, const SearchConfig& search, NormalisationBounds bounds) {
  MorldState st;
  st.bounds = std::move(bounds);
  const auto weights = initial_weights(search);
  for (std::size_t k = 0; k < weights.size(); ++k) st.subs.push_back(make_subproblem(ev, search, k, weights[k]));
  for (std::size_t k = 0; k < weights.size(); ++k)
    st.subs[k].neighbourhood = neighbourhood(weights, k, static_cast<std::size_t>(search.neighbourhood_size));
  st.pending.resize(st.subs.size());
  for (std::size_t k = 0; k < st.subs.size(); ++k) st.pending[k].push_back(st.subs[k].es.incumbent);
  st.evaluations = static_cast<std::int64_t>(st.subs.size());
  return st;
}

/// One exchange round: `iterations` ES steps per subproblem, then the shared
/// pool (if enabled), archive insertion and PSA (if enabled), in subproblem order.
inline SearchHistoryRow morld_round(MorldState& st, const PolicyEvaluator& ev, const SearchConfig& search,
                                    int iterations, const Point& reference, const SearchOptions& opts = {}) {
  const std::size_t n = st.subs.size();
  std::vector<std::vector<CandidateEval>> seen = std::move(st.pending);
  seen.resize(n);
  st.pending.clear();
  const bool across = opts.jobs > 1 && n > 1;
  auto improve = [&](std::size_t k) {
    SubProblem& sp = st.subs[k];
    for (int i = 0; i < iterations; ++i)
      es_iterate(sp.es, ev, sp.weight, st.bounds, search, across ? 1 : opts.jobs, &seen[k]);
  };
  if (across) parallel_for(n, opts.jobs, improve);
  else
    for (std::size_t k = 0; k < n; ++k) improve(k);
  st.evaluations += static_cast<std::int64_t>(n) * iterations * search.es_population;

  SearchHistoryRow row;
  if (search.shared_pool_enabled) {
    for (std::size_t j = 0; j < n; ++j) {
      SubProblem& recv = st.subs[j];
      for (std::size_t i = 0; i < n; ++i) {
        const auto& nb = st.subs[i].neighbourhood;
        if (std::find(nb.begin(), nb.end(), j) == nb.end()) continue;
        for (const auto& c : seen[i]) {
          if (scalarise(c.discounted, recv.weight, st.bounds) > recv.best_scalarised(st.bounds)) {
            recv.es.incumbent = c;
            ++row.adoptions;
          }
        }
      }
    }
  }

  for (std::size_t k = 0; k < n; ++k)
    for (auto& c : seen[k]) {
      const std::int64_t id = st.next_id++;
      if (c.feasible && st.archive.insert(c.raw.to_point(), id)) st.archive_members.emplace(id, std::move(c));
    }
  std::erase_if(st.archive_members, [&](const auto& kv) {
    const auto& ids = st.archive.front().ids;
    return std::find(ids.begin(), ids.end(), kv.first) == ids.end();
  });

  if (search.psa_enabled && !st.archive.empty())
    for (auto& sp : st.subs)
      sp.weight = psa_adapt(sp.weight, sp.es.incumbent.raw, st.archive.front().points, st.bounds, search.psa_delta);

  ++st.round;
  row.round = st.round;
  row.evaluations = st.evaluations;
  const IndicatorSnapshot snap = indicator_snapshot(st.archive.front().points, reference, opts.eum_weights);
  row.hypervolume = snap.hypervolume;
  row.sparsity = snap.sparsity;
  row.eum = snap.eum;
  row.archive_size = st.archive.size();
  return row;
}

struct MorldResult {
  Front archive;
  std::vector<CandidateEval> archive_candidates;  // aligned with archive.ids
  std::vector<SolutionRecord> final_subproblems;
  std::vector<SearchHistoryRow> history;
  NormalisationBounds bounds;
};

inline MorldResult run_morld(const ScenarioConfig& cfg, const SearchConfig& search, const SearchOptions& opts = {}) {
  search.validate();
  MorldResult res;
  res.bounds = resolve_bounds(cfg, search, opts.jobs);
  const PolicyEvaluator ev(cfg, search, evaluation_traces(cfg, search));
  MorldState st = morld_init(ev, search, res.bounds);
  const Point reference = cfg.reference_point.to_point();
  for (int done = 0; done < search.iterations;) {
    const int step = std::min(search.exchange_interval, search.iterations - done);
    res.history.push_back(morld_round(st, ev, search, step, reference, opts));
    if (opts.on_round) opts.on_round(res.history.back());
    done += step;
  }
  res.archive = st.archive.front();
  for (auto id : res.archive.ids) res.archive_candidates.push_back(st.archive_members.at(id));
  for (std::size_t k = 0; k < st.subs.size(); ++k)
    res.final_subproblems.push_back({static_cast<std::int64_t>(k), st.subs[k].weight, st.subs[k].es.incumbent});
  return res;
}

}  // namespace echelon
