#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "echelon/horizon_eval.hpp"
#include "echelon/parallel.hpp"
#include "echelon/pareto.hpp"
#include "echelon/rng.hpp"

namespace echelon {

struct Nsga2Config {
  int population_size = 300;
  int offspring_per_generation = 30;
  double crossover_probability = 0.9;
  double crossover_eta = 15.0;
  double mutation_eta = 20.0;
  std::optional<double> mutation_probability;  // default 1 / number of genes
  int generations = 200;
  int replications = 1;  // demand traces averaged per evaluation
  std::uint64_t seed = 0;

  void validate() const {
    if (population_size < 4) throw std::invalid_argument("nsga2: population_size must be at least 4");
    if (offspring_per_generation < 1) throw std::invalid_argument("nsga2: offspring_per_generation must be positive");
    if (crossover_probability < 0.0 || crossover_probability > 1.0)
      throw std::invalid_argument("nsga2: crossover_probability must lie in [0, 1]");
    if (mutation_probability && (*mutation_probability < 0.0 || *mutation_probability > 1.0))
      throw std::invalid_argument("nsga2: mutation_probability must lie in [0, 1]");
    if (!(crossover_eta > 0.0) || !(mutation_eta > 0.0)) throw std::invalid_argument("nsga2: etas must be positive");
    if (generations < 0) throw std::invalid_argument("nsga2: generations must be non-negative");
    if (replications < 1) throw std::invalid_argument("nsga2: replications must be positive");
  }
};

struct Individual {
  DecisionVector dv;
  EvalResult eval;
  std::int64_t id = -1;  // evaluation index within the run
  int rank = 0;
  double crowding = 0.0;
};

/// Feasible beats infeasible, two infeasibles compare by violation, two
/// feasibles by Pareto dominance.
inline bool constrained_dominates(const EvalResult& a, const EvalResult& b) {
  if (a.feasible != b.feasible) return a.feasible;
  if (!a.feasible) return a.violation < b.violation;
  return dominates(a.objectives.to_point(), b.objectives.to_point());
}

/// Fast non-dominated sort under constrained domination. Each front lists
/// indices in ascending order.
inline std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<EvalResult>& pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (constrained_dominates(pop[i], pop[j])) dominated[i].push_back(j);
      else if (constrained_dominates(pop[j], pop[i])) ++count[i];
    }
    if (count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current)
      for (std::size_t j : dominated[i])
        if (--count[j] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

/// Crowding distance of each point within one front. Extremes of every
/// objective get +inf; ties are ordered by index.
inline std::vector<double> crowding_distance(const std::vector<Point>& values) {
  const std::size_t n = values.size();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(n);
  for (std::size_t b = 0; b < values.front().size(); ++b) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return values[x][b] < values[y][b]; });
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    const double range = values[order.back()][b] - values[order.front()][b];
    if (!(range > 0.0)) continue;
    for (std::size_t k = 1; k + 1 < n; ++k)
      dist[order[k]] += (values[order[k + 1]][b] - values[order[k - 1]][b]) / range;
  }
  return dist;
}

/// Bounded simulated binary crossover (Deb and Agrawal), per gene with
/// probability 1/2 and a random swap of the two children.
inline std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1, const DecisionVector& p2,
                                                              const GeneBounds& bounds, double eta, double prob,
                                                              Rng& rng) {
  if (p1.genes.size() != p2.genes.size()) throw std::invalid_argument("sbx: parents differ in length");
  DecisionVector c1 = p1, c2 = p2;
  if (!(rng.uniform() < prob)) return {c1, c2};
  const double exponent = 1.0 / (eta + 1.0);
  for (std::size_t i = 0; i < p1.genes.size(); ++i) {
    if (rng.uniform() > 0.5) continue;
    const double a = p1.genes[i], b = p2.genes[i];
    if (std::fabs(a - b) <= 1e-14) continue;
    const double y1 = std::min(a, b), y2 = std::max(a, b);
    const double yl = bounds.lower[i], yu = bounds.upper[i];
    const double u = rng.uniform();
    auto spread = [&](double beta) {
      const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
      return u <= 1.0 / alpha ? std::pow(u * alpha, exponent) : std::pow(1.0 / (2.0 - u * alpha), exponent);
    };
    const double bq1 = spread(1.0 + 2.0 * (y1 - yl) / (y2 - y1));
    const double bq2 = spread(1.0 + 2.0 * (yu - y2) / (y2 - y1));
    const double lo = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), yl, yu);
    const double hi = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), yl, yu);
    if (rng.uniform() <= 0.5) {
      c1.genes[i] = hi;
      c2.genes[i] = lo;
    } else {
      c1.genes[i] = lo;
      c2.genes[i] = hi;
    }
  }
  return {c1, c2};
}

/// Bounded polynomial mutation, each gene with probability `prob`.
inline DecisionVector polynomial_mutation(DecisionVector dv, const GeneBounds& bounds, double eta, double prob,
                                          Rng& rng) {
  const double exponent = 1.0 / (eta + 1.0);
  for (std::size_t i = 0; i < dv.genes.size(); ++i) {
    if (!(rng.uniform() < prob)) continue;
    const double yl = bounds.lower[i], yu = bounds.upper[i];
    if (!(yu > yl)) continue;
    const double y = dv.genes[i];
    const double d1 = (y - yl) / (yu - yl), d2 = (yu - y) / (yu - yl);
    const double u = rng.uniform();
    double dq = 0.0;
    if (u <= 0.5) {
      const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
      dq = std::pow(v, exponent) - 1.0;
    } else {
      const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      dq = 1.0 - std::pow(v, exponent);
    }
    dv.genes[i] = std::clamp(y + dq * (yu - yl), yl, yu);
  }
  return dv;
}

inline DecisionVector random_decision(const GeneBounds& bounds, Rng& rng) {
  DecisionVector dv;
  dv.genes.resize(bounds.lower.size());
  for (std::size_t i = 0; i < dv.genes.size(); ++i) dv.genes[i] = rng.uniform(bounds.lower[i], bounds.upper[i]);
  return dv;
}

struct Nsga2HistoryRow {
  int generation = 0;
  std::int64_t evaluations = 0;
  double hypervolume = 0.0;  // elitist archive
  std::optional<double> sparsity;
  std::optional<double> eum;
  double population_hypervolume = 0.0;
  double best_violation = 0.0;
  std::size_t archive_size = 0;
  std::size_t feasible = 0;
};

struct Nsga2Result {
  Front front;  // non-dominated feasible members of the final population
  std::vector<DecisionVector> front_decisions;
  Front archive;  // every feasible evaluation, filtered
  std::vector<DecisionVector> archive_decisions;
  std::vector<Nsga2HistoryRow> history;
  std::vector<Individual> population;
};

struct Nsga2Options {
  int jobs = 1;
  std::vector<WeightVector> eum_weights;  // empty disables the eum column
  std::function<void(const Nsga2HistoryRow&)> on_generation;
};

/// Demand traces used by one NSGA-II run, one per replication.
inline std::vector<DemandTrace> nsga2_traces(const ScenarioConfig& cfg, const Nsga2Config& nsga) {
  std::vector<DemandTrace> traces;
  for (int r = 0; r < nsga.replications; ++r)
    traces.push_back(sample_trace(cfg, derive_seed(nsga.seed, {stream::nsga_trace, static_cast<std::uint64_t>(r)})));
  return traces;
}

namespace detail {

// Ranks and crowding for `pop`, in place.
inline void assign_rank_and_crowding(std::vector<Individual>& pop, std::vector<std::vector<std::size_t>>* fronts_out) {
  std::vector<EvalResult> evals;
  evals.reserve(pop.size());
  for (const auto& ind : pop) evals.push_back(ind.eval);
  auto fronts = nondominated_sort(evals);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<Point> values;
    for (std::size_t i : fronts[r]) values.push_back(pop[i].eval.objectives.to_point());
    const auto dist = crowding_distance(values);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      pop[fronts[r][k]].rank = static_cast<int>(r);
      pop[fronts[r][k]].crowding = dist[k];
    }
  }
  if (fronts_out) *fronts_out = std::move(fronts);
}

inline bool crowded_better(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

inline std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
  const auto i = static_cast<std::size_t>(rng.below(pop.size()));
  const auto j = static_cast<std::size_t>(rng.below(pop.size()));
  return crowded_better(pop[j], pop[i]) ? j : i;
}

}  // namespace detail

/// Elitist (mu + lambda) NSGA-II with feasibility-first domination.
inline Nsga2Result run_nsga2(const ScenarioConfig& cfg, const Nsga2Config& nsga, std::span<const DemandTrace> traces,
                             const Nsga2Options& opts = {}) {
  nsga.validate();
  const Environment env(cfg);
  const GeneBounds bounds = gene_bounds(cfg);
  const double pm = nsga.mutation_probability.value_or(1.0 / static_cast<double>(bounds.lower.size()));
  const Point reference = cfg.reference_point.to_point();
  const auto mu = static_cast<std::size_t>(nsga.population_size);

  Nsga2Result res;
  ParetoArchive archive;
  std::map<std::int64_t, DecisionVector> archived;  // decisions of current archive members
  std::int64_t evaluations = 0;

  auto evaluate_all = [&](std::vector<Individual>& batch) {
    parallel_for(batch.size(), opts.jobs, [&](std::size_t i) { batch[i].eval = evaluate(batch[i].dv, env, traces); });
    for (auto& ind : batch) {
      ind.id = evaluations++;
      if (ind.eval.feasible && archive.insert(ind.eval.objectives.to_point(), ind.id)) {
        archived.emplace(ind.id, ind.dv);
        std::erase_if(archived, [&](const auto& kv) {
          return std::find(archive.front().ids.begin(), archive.front().ids.end(), kv.first) == archive.front().ids.end();
        });
      }
    }
  };

  auto record = [&](int generation, const std::vector<Individual>& pop) {
    Nsga2HistoryRow row;
    row.generation = generation;
    row.evaluations = evaluations;
    const IndicatorSnapshot snap = indicator_snapshot(archive.front().points, reference, opts.eum_weights);
    row.hypervolume = snap.hypervolume;
    row.sparsity = snap.sparsity;
    row.eum = snap.eum;
    std::vector<Point> feasible;
    row.best_violation = std::numeric_limits<double>::infinity();
    for (const auto& ind : pop) {
      row.best_violation = std::min(row.best_violation, ind.eval.violation);
      if (ind.eval.feasible) feasible.push_back(ind.eval.objectives.to_point());
    }
    row.feasible = feasible.size();
    row.population_hypervolume = hypervolume(pareto_filter(feasible).points, reference);
    row.archive_size = archive.size();
    res.history.push_back(row);
    if (opts.on_generation) opts.on_generation(row);
  };

  std::vector<Individual> pop(mu);
  for (std::size_t i = 0; i < mu; ++i) {
    Rng rng(derive_seed(nsga.seed, {stream::nsga_init, i}));
    pop[i].dv = random_decision(bounds, rng);
  }
  evaluate_all(pop);
  detail::assign_rank_and_crowding(pop, nullptr);
  record(0, pop);

  const auto lambda = static_cast<std::size_t>(nsga.offspring_per_generation);
  for (int g = 1; g <= nsga.generations; ++g) {
    std::vector<Individual> children(lambda);
    const std::size_t pairs = (lambda + 1) / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
      Rng rng(derive_seed(nsga.seed, {stream::nsga_offspring, static_cast<std::uint64_t>(g), p}));
      const std::size_t a = detail::tournament(pop, rng);
      const std::size_t b = detail::tournament(pop, rng);
      auto [c1, c2] = sbx_crossover(pop[a].dv, pop[b].dv, bounds, nsga.crossover_eta, nsga.crossover_probability, rng);
      children[2 * p].dv = polynomial_mutation(std::move(c1), bounds, nsga.mutation_eta, pm, rng);
      auto second = polynomial_mutation(std::move(c2), bounds, nsga.mutation_eta, pm, rng);
      if (2 * p + 1 < lambda) children[2 * p + 1].dv = std::move(second);
    }
    evaluate_all(children);

    std::vector<Individual> merged = std::move(pop);
    for (auto& c : children) merged.push_back(std::move(c));
    std::vector<std::vector<std::size_t>> fronts;
    detail::assign_rank_and_crowding(merged, &fronts);
    std::vector<std::size_t> keep;
    for (const auto& front : fronts) {
      if (keep.size() + front.size() <= mu) {
        keep.insert(keep.end(), front.begin(), front.end());
        continue;
      }
      std::vector<std::size_t> last = front;
      std::stable_sort(last.begin(), last.end(),
                       [&](std::size_t x, std::size_t y) { return merged[x].crowding > merged[y].crowding; });
      keep.insert(keep.end(), last.begin(), last.begin() + static_cast<std::ptrdiff_t>(mu - keep.size()));
      break;
    }
    std::sort(keep.begin(), keep.end());
    pop.clear();
    for (std::size_t i : keep) pop.push_back(std::move(merged[i]));
    record(g, pop);
  }

  Front feasible;
  for (const auto& ind : pop)
    if (ind.eval.feasible) feasible.push_back(ind.eval.objectives.to_point(), ind.id);
  res.front = pareto_filter(feasible);
  for (auto id : res.front.ids)
    for (const auto& ind : pop)
      if (ind.id == id) res.front_decisions.push_back(ind.dv);
  res.archive = archive.front();
  for (auto id : res.archive.ids) res.archive_decisions.push_back(archived.at(id));
  res.population = std::move(pop);
  return res;
}

inline Nsga2Result run_nsga2(const ScenarioConfig& cfg, const Nsga2Config& nsga, const Nsga2Options& opts = {}) {
  const auto traces = nsga2_traces(cfg, nsga);
  return run_nsga2(cfg, nsga, traces, opts);
}

}  // namespace echelon
