#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

#include "echelon/env.hpp"

namespace echelon {

/// Whole-horizon chromosome, period-major: for each period, one gene per
/// manufacturer followed by one gene per route in scenario order.
struct DecisionVector {
  std::vector<double> genes;
  friend bool operator==(const DecisionVector&, const DecisionVector&) = default;
};

struct GeneBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Route genes live in [0, Cap]. Manufacturing genes get [0, |suppliers| * Cap],
/// the most the suppliers could deliver; the simulator overrides them anyway.
inline GeneBounds gene_bounds(const ScenarioConfig& cfg) {
  const std::size_t dim = action_dim(cfg);
  const std::size_t n_mfg = cfg.echelons.manufacturers.size();
  const auto cap = static_cast<double>(cfg.capacity);
  const double mfg_upper = static_cast<double>(cfg.echelons.suppliers.size()) * cap;
  GeneBounds b;
  b.lower.assign(decision_dim(cfg), 0.0);
  b.upper.resize(decision_dim(cfg));
  for (std::size_t i = 0; i < b.upper.size(); ++i) b.upper[i] = (i % dim) < n_mfg ? mfg_upper : cap;
  return b;
}

inline DecisionVector repair_bounds(DecisionVector dv, const GeneBounds& bounds) {
  for (std::size_t i = 0; i < dv.genes.size(); ++i) dv.genes[i] = std::clamp(dv.genes[i], bounds.lower[i], bounds.upper[i]);
  return dv;
}

inline DecisionVector repair_bounds(DecisionVector dv, const ScenarioConfig& cfg) {
  return repair_bounds(std::move(dv), gene_bounds(cfg));
}

struct EvalResult {
  ObjectiveVector objectives;
  double violation = 0.0;
  bool feasible = true;
};

/// Plays a decision vector through the simulator, one period slice per step.
inline EpisodeResult simulate_decision(const Environment& env, const DecisionVector& dv, const DemandTrace& trace,
                                       bool keep_log = true) {
  if (dv.genes.size() != decision_dim(env.config()))
    throw std::invalid_argument("decision vector length " + std::to_string(dv.genes.size()) + " does not match " +
                                std::to_string(decision_dim(env.config())));
  const std::size_t dim = env.action_dim();
  const std::size_t n_mfg = env.config().echelons.manufacturers.size();
  auto policy = [&](const std::vector<double>&, int t) {
    return ActionVector::from_flat(std::span(dv.genes).subspan(static_cast<std::size_t>(t) * dim, dim), n_mfg);
  };
  return rollout(env, trace, policy, 1.0, keep_log);
}

/// Objective totals and inventory-shortfall violation, averaged over the
/// given traces (one trace is the default replication count).
inline EvalResult evaluate(const DecisionVector& dv, const Environment& env, std::span<const DemandTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("evaluate needs at least one demand trace");
  EvalResult res;
  for (const auto& trace : traces) {
    const EpisodeResult ep = simulate_decision(env, dv, trace, false);
    res.objectives += ep.totals;
    res.violation += ep.violation;
  }
  const double inv = 1.0 / static_cast<double>(traces.size());
  res.objectives *= inv;
  res.violation *= inv;
  res.feasible = res.violation == 0.0;
  return res;
}

inline EvalResult evaluate(const DecisionVector& dv, const Environment& env, const DemandTrace& trace) {
  return evaluate(dv, env, std::span<const DemandTrace>(&trace, 1));
}

}  // namespace echelon
