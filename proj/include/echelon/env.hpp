#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "echelon/demand.hpp"
#include "echelon/objective.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

/// Per-period decision: one production entry per manufacturer and one
/// shipment entry per route, both in scenario order.
struct ActionVector {
  std::vector<double> production;
  std::vector<double> shipments;

  static ActionVector zeros(const ScenarioConfig& cfg) {
    return {std::vector<double>(cfg.echelons.manufacturers.size(), 0.0), std::vector<double>(cfg.routes.size(), 0.0)};
  }

  /// Flat layout: manufacturers first, then routes.
  static ActionVector from_flat(std::span<const double> flat, std::size_t manufacturers) {
    ActionVector a;
    a.production.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(manufacturers));
    a.shipments.assign(flat.begin() + static_cast<std::ptrdiff_t>(manufacturers), flat.end());
    return a;
  }
};

/// Dynamic simulator state. Quantities of product are whole units.
struct SimState {
  std::vector<Units> inventory;  // per stock-holding node, may be negative
  std::vector<Units> pipeline;   // route-major, lead_time slots each; slot 0 arrives next period
  double cumulative_emission = 0.0;
  double avg_sl_inequality = 0.0;
  int clock = 0;
  std::vector<Units> sl_arrived;  // per retailer, cumulative arrivals
  std::vector<Units> sl_demand;   // per retailer, cumulative demand

  friend bool operator==(const SimState&, const SimState&) = default;
};

/// Diagnostics for one period.
struct StepInfo {
  int t = 0;
  double revenue = 0.0;
  double production_cost = 0.0;
  double transport_cost = 0.0;
  double inventory_cost = 0.0;
  double emission = 0.0;
  double sl_inequality = 0.0;
  double penalty = 0.0;
  std::vector<double> service_level;         // per market
  std::vector<Units> demand;                 // per market
  std::vector<Units> absorbed;               // per market
  std::vector<Units> demand_loss;            // per market
  std::vector<Units> arrivals;               // per route
  std::vector<Units> shipments;              // per route, as executed
  std::vector<Units> production;             // per manufacturer, as executed
  std::vector<double> requested_production;  // per manufacturer, from the action
  std::vector<Units> inventory;              // per stock node, end of period
  bool clipped = false;
};

struct StepOutcome {
  ObjectiveVector reward;      // with penalty
  ObjectiveVector raw_reward;  // without penalty
  double penalty = 0.0;        // <= 0
  std::vector<double> observation;
  StepInfo info;
};

/// Affine bounds used to scale each observation component into [0, 1].
///
///   inventory of node j   [-S_j, S_j], S_j = max(I0_j, 1) + Cap * L * max(1, in-degree_j)
///   pipeline slot         [0, Cap]
///   cumulative emission   [0, -reference_point.neg_emission]
///   average SL inequality [0, floor(n/2) * ceil(n/2)], n = number of markets
///   current demand        [0, 2 * mean * (1 + seasonal amplitude)]
struct ObservationBounds {
  std::vector<double> inventory_scale;
  double pipeline_scale = 1.0;
  double emission_scale = 1.0;
  double inequality_scale = 1.0;
  std::vector<double> demand_scale;
};

class Environment {
 public:
  explicit Environment(ScenarioConfig cfg) : cfg_(std::move(cfg)), topo_((require_valid(cfg_), cfg_)) {
    const auto L = static_cast<double>(cfg_.lead_time);
    const auto cap = static_cast<double>(cfg_.capacity);
    for (std::size_t s = 0; s < topo_.stock_nodes.size(); ++s) {
      const double indeg = std::max<double>(1.0, static_cast<double>(topo_.routes_in[s].size()));
      bounds_.inventory_scale.push_back(std::max<double>(static_cast<double>(topo_.initial_inventory[s]), 1.0) +
                                        cap * L * indeg);
    }
    bounds_.pipeline_scale = cap;
    bounds_.emission_scale = cfg_.reference_point.neg_emission < 0.0 ? -cfg_.reference_point.neg_emission : 1.0;
    const double n = static_cast<double>(cfg_.echelons.markets.size());
    bounds_.inequality_scale = std::max(1.0, std::floor(n / 2.0) * std::ceil(n / 2.0));
    for (NodeId m : cfg_.echelons.markets) {
      const DemandSpec& d = cfg_.demands.at(m);
      bounds_.demand_scale.push_back(std::max(1.0, 2.0 * d.base_mean() * (1.0 + d.seasonal_amplitude)));
    }
  }

  const ScenarioConfig& config() const { return cfg_; }
  const Topology& topology() const { return topo_; }
  const ObservationBounds& observation_bounds() const { return bounds_; }
  std::size_t action_dim() const { return echelon::action_dim(cfg_); }
  std::size_t observation_dim() const { return echelon::observation_dim(cfg_); }

  SimState reset(const DemandTrace& trace) const {
    if (!trace_matches(cfg_, trace))
      throw std::invalid_argument("demand trace does not match the scenario's markets or horizon");
    SimState s;
    s.inventory = topo_.initial_inventory;
    s.pipeline.assign(topo_.routes.size() * static_cast<std::size_t>(cfg_.lead_time), 0);
    s.sl_arrived.assign(topo_.retailer_slot.size(), 0);
    s.sl_demand.assign(topo_.retailer_slot.size(), 0);
    return s;
  }

  /// Advances `state` by one period in place.
  StepOutcome advance(SimState& state, const ActionVector& action, const DemandTrace& trace) const {
    if (state.clock >= cfg_.horizon) throw std::logic_error("episode already terminal");
    if (action.production.size() != topo_.manufacturer_slot.size() || action.shipments.size() != topo_.routes.size())
      throw std::invalid_argument("action dimensionality does not match the scenario");

    const int t = state.clock;
    const std::size_t L = static_cast<std::size_t>(cfg_.lead_time);
    const std::size_t n_routes = topo_.routes.size();
    const std::size_t n_retail = topo_.retailer_slot.size();
    StepOutcome out;
    StepInfo& info = out.info;
    info.t = t;

    // (1) arrivals: slot 0 of every route lands now; the rest age by one.
    info.arrivals.resize(n_routes);
    for (std::size_t r = 0; r < n_routes; ++r) {
      Units* ring = state.pipeline.data() + r * L;
      info.arrivals[r] = ring[0];
      std::copy(ring + 1, ring + L, ring);
      ring[L - 1] = 0;
    }

    // (2) production is whatever the suppliers delivered; the requested value is only logged.
    info.requested_production = action.production;
    info.production.assign(topo_.manufacturer_slot.size(), 0);
    for (std::size_t r = 0; r < n_routes; ++r) {
      const auto& rt = topo_.routes[r];
      if (rt.from_slot < 0) info.production[static_cast<std::size_t>(topo_.slot_manufacturer[rt.to_slot])] += info.arrivals[r];
    }

    // Executed shipments: clipped into [0, Cap] and rounded to whole units.
    info.shipments.resize(n_routes);
    const auto cap = static_cast<double>(cfg_.capacity);
    for (std::size_t r = 0; r < n_routes; ++r) {
      double q = action.shipments[r];
      if (!std::isfinite(q) || q < 0.0 || q > cap) {
        info.clipped = true;
        q = std::isfinite(q) ? std::clamp(q, 0.0, cap) : 0.0;
      }
      info.shipments[r] = std::llround(q);
    }

    // (3) inventory balance: previous + inflow - outflow.
    for (std::size_t s = 0; s < state.inventory.size(); ++s) {
      Units inflow = 0;
      if (const int m = topo_.slot_manufacturer[s]; m >= 0) inflow = info.production[static_cast<std::size_t>(m)];
      else
        for (int r : topo_.routes_in[s]) inflow += info.arrivals[static_cast<std::size_t>(r)];
      Units outflow = 0;
      for (int r : topo_.routes_out[s]) outflow += info.shipments[static_cast<std::size_t>(r)];
      state.inventory[s] += inflow - outflow;
    }

    // (4) markets take what arrived at their retailer this period, up to demand.
    info.demand.resize(n_retail);
    info.absorbed.resize(n_retail);
    info.demand_loss.resize(n_retail);
    info.service_level.resize(n_retail);
    std::vector<Units> retail_arrivals(n_retail, 0);
    for (std::size_t k = 0; k < n_retail; ++k) {
      const int s = topo_.retailer_slot[k];
      for (int r : topo_.routes_in[s]) retail_arrivals[k] += info.arrivals[static_cast<std::size_t>(r)];
      const Units d = trace.per_market[k][static_cast<std::size_t>(t)];
      const Units absorbed = std::min(retail_arrivals[k], d);
      state.inventory[static_cast<std::size_t>(s)] -= absorbed;
      info.demand[k] = d;
      info.absorbed[k] = absorbed;
      info.demand_loss[k] = d - absorbed;
      info.service_level[k] =
          d == 0 ? 1.0 : std::min(static_cast<double>(retail_arrivals[k]) / static_cast<double>(d), 1.0);
    }

    // (5) new shipments enter the far end of the pipeline.
    for (std::size_t r = 0; r < n_routes; ++r) state.pipeline[r * L + (L - 1)] = info.shipments[r];

    // (6) per-period rewards.
    for (std::size_t k = 0; k < n_retail; ++k) info.revenue += static_cast<double>(retail_arrivals[k]) * topo_.price[k];
    double production_emission = 0.0;
    for (std::size_t m = 0; m < info.production.size(); ++m) {
      const auto q = static_cast<double>(info.production[m]);
      info.production_cost += q * topo_.production_cost[m] / topo_.yield_ratio[m];
      production_emission += q * topo_.production_emission[m];
    }
    double transport_emission = 0.0;
    for (std::size_t r = 0; r < n_routes; ++r) {
      const auto q = static_cast<double>(info.shipments[r]);
      info.transport_cost += q * topo_.routes[r].cost * static_cast<double>(L);
      transport_emission += q * topo_.routes[r].emission * static_cast<double>(L);
    }
    double holding_emission = 0.0;
    double shortfall = 0.0;
    for (std::size_t s = 0; s < state.inventory.size(); ++s) {
      const Units inv = state.inventory[s];
      const auto on_hand = static_cast<double>(std::max<Units>(inv, 0));
      info.inventory_cost += on_hand * topo_.holding_cost[s];
      holding_emission += on_hand * topo_.holding_emission[s];
      shortfall += static_cast<double>(std::min<Units>(inv, 0));
    }
    info.emission = holding_emission + production_emission + transport_emission;
    for (std::size_t a = 0; a < n_retail; ++a)
      for (std::size_t b = a + 1; b < n_retail; ++b)
        info.sl_inequality += std::fabs(info.service_level[a] - info.service_level[b]);

    // (7) additive big-M penalty on the profit and emission components.
    info.penalty = shortfall * cfg_.big_m;
    out.penalty = info.penalty;
    out.raw_reward = {info.revenue - (info.production_cost + info.transport_cost + info.inventory_cost), -info.emission,
                      -info.sl_inequality};
    out.reward = out.raw_reward;
    out.reward.profit += info.penalty;
    out.reward.neg_emission += info.penalty;

    // (8) running aggregates.
    state.cumulative_emission += info.emission;
    state.avg_sl_inequality = (state.avg_sl_inequality * t + info.sl_inequality) / (t + 1);
    for (std::size_t k = 0; k < n_retail; ++k) {
      state.sl_arrived[k] += retail_arrivals[k];
      state.sl_demand[k] += info.demand[k];
    }
    state.clock = t + 1;
    info.inventory = state.inventory;
    return out;
  }

  std::pair<SimState, StepOutcome> step(const SimState& state, const ActionVector& action,
                                        const DemandTrace& trace) const {
    SimState next = state;
    StepOutcome out = advance(next, action, trace);
    out.observation = observe(next, trace);
    return {std::move(next), std::move(out)};
  }

  /// [inventories, pipeline (route-major), CE, AF, current demands], each in [0, 1].
  std::vector<double> observe(const SimState& state, const DemandTrace& trace) const {
    std::vector<double> obs;
    obs.reserve(observation_dim());
    auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };
    for (std::size_t s = 0; s < state.inventory.size(); ++s) {
      const double S = bounds_.inventory_scale[s];
      obs.push_back(unit((static_cast<double>(state.inventory[s]) + S) / (2.0 * S)));
    }
    for (Units q : state.pipeline) obs.push_back(unit(static_cast<double>(q) / bounds_.pipeline_scale));
    obs.push_back(unit(state.cumulative_emission / bounds_.emission_scale));
    obs.push_back(unit(state.avg_sl_inequality / bounds_.inequality_scale));
    for (std::size_t k = 0; k < trace.per_market.size(); ++k) {
      const double d = state.clock < cfg_.horizon
                           ? static_cast<double>(trace.per_market[k][static_cast<std::size_t>(state.clock)])
                           : 0.0;
      obs.push_back(unit(d / bounds_.demand_scale[k]));
    }
    return obs;
  }

 private:
  ScenarioConfig cfg_;
  Topology topo_;
  ObservationBounds bounds_;
};

struct EpisodeResult {
  ObjectiveVector totals;      // undiscounted raw rewards
  ObjectiveVector discounted;  // sum of gamma^t * penalised rewards
  double total_penalty = 0.0;
  double violation = 0.0;  // sum over periods and nodes of negative inventory, in units
  std::vector<StepInfo> log;

  bool feasible() const { return violation == 0.0; }
};

/// Runs one episode. `policy(observation, t)` returns the ActionVector for period t.
template <class Policy>
EpisodeResult rollout(const Environment& env, const DemandTrace& trace, Policy&& policy, double discount,
                      bool keep_log = true) {
  EpisodeResult res;
  SimState state = env.reset(trace);
  double weight = 1.0;
  const int horizon = env.config().horizon;
  if (keep_log) res.log.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const ActionVector action = policy(env.observe(state, trace), t);
    StepOutcome out = env.advance(state, action, trace);
    res.totals += out.raw_reward;
    res.discounted += out.reward * weight;
    res.total_penalty += out.penalty;
    for (Units inv : state.inventory)
      if (inv < 0) res.violation += static_cast<double>(-inv);
    weight *= discount;
    if (keep_log) res.log.push_back(std::move(out.info));
  }
  return res;
}

}  // namespace echelon
