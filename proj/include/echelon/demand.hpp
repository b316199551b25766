#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "echelon/rng.hpp"
#include "echelon/scenario.hpp"

namespace echelon {

/// Realised demand per market and period. Rows follow the order of
/// cfg.echelons.markets.
struct DemandTrace {
  std::vector<NodeId> markets;
  std::vector<std::vector<Units>> per_market;
  std::uint64_t seed = 0;

  std::size_t horizon() const { return per_market.empty() ? 0 : per_market.front().size(); }

  const std::vector<Units>& of(NodeId market) const {
    for (std::size_t k = 0; k < markets.size(); ++k)
      if (markets[k] == market) return per_market[k];
    throw std::out_of_range("demand trace has no market " + std::to_string(market));
  }

  friend bool operator==(const DemandTrace&, const DemandTrace&) = default;
};

inline double seasonal_factor(const DemandSpec& spec, int t) {
  return 1.0 + spec.seasonal_amplitude *
                   std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(spec.seasonal_period));
}

/// Seeded demand trace. Market m draws from its own stream
/// derive_seed(seed, {stream::demand, m}), so traces do not depend on the
/// order or specs of other markets. Normal draws are rounded and clamped at
/// zero before the seasonal multiplier; the product is rounded again.
inline DemandTrace sample_trace(const ScenarioConfig& cfg, std::uint64_t seed) {
  DemandTrace trace;
  trace.seed = seed;
  trace.markets = cfg.echelons.markets;
  for (NodeId m : cfg.echelons.markets) {
    const DemandSpec& spec = cfg.demands.at(m);
    Rng rng(derive_seed(seed, {stream::demand, static_cast<std::uint64_t>(m)}));
    std::vector<Units> row(static_cast<std::size_t>(cfg.horizon));
    for (int t = 0; t < cfg.horizon; ++t) {
      Units base = 0;
      if (spec.kind == DemandSpec::Kind::normal) base = std::llround(rng.normal(spec.mean, spec.std_dev));
      else base = rng.poisson(spec.rate);
      base = std::max<Units>(base, 0);
      const Units d = std::llround(static_cast<double>(base) * seasonal_factor(spec, t));
      row[static_cast<std::size_t>(t)] = std::max<Units>(d, 0);
    }
    trace.per_market.push_back(std::move(row));
  }
  return trace;
}

inline double expected_demand(const ScenarioConfig& cfg, NodeId market, int t) {
  auto it = cfg.demands.find(market);
  if (it == cfg.demands.end()) throw std::invalid_argument("unknown market " + std::to_string(market));
  if (t < 0 || t >= cfg.horizon) throw std::out_of_range("period outside horizon");
  return std::max(0.0, it->second.base_mean() * seasonal_factor(it->second, t));
}

/// True when the trace covers exactly the config's markets and horizon.
inline bool trace_matches(const ScenarioConfig& cfg, const DemandTrace& trace) {
  if (trace.markets != cfg.echelons.markets) return false;
  return std::all_of(trace.per_market.begin(), trace.per_market.end(),
                     [&](const auto& row) { return row.size() == static_cast<std::size_t>(cfg.horizon); });
}

inline void write_trace_csv(std::ostream& os, const DemandTrace& trace) {
  os << "t,market_id,demand\n";
  for (std::size_t t = 0; t < trace.horizon(); ++t)
    for (std::size_t k = 0; k < trace.markets.size(); ++k)
      os << t << ',' << trace.markets[k] << ',' << trace.per_market[k][t] << '\n';
}

}  // namespace echelon
