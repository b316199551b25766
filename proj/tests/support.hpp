#pragma once

#include <random>
#include <vector>

#include "echelon/env.hpp"
#include "echelon/horizon_eval.hpp"

namespace testing_support {

/// Uniform shipments in [0, scale * Cap] and production in [0, Cap].
inline echelon::ActionVector random_action(const echelon::ScenarioConfig& cfg, std::mt19937_64& gen, double scale = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto a = echelon::ActionVector::zeros(cfg);
  const auto cap = static_cast<double>(cfg.capacity);
  for (auto& q : a.production) q = u(gen) * cap;
  for (auto& q : a.shipments) q = u(gen) * scale * cap;
  return a;
}

/// Decision vector with each gene uniform in its bounds, shrunk by `scale`.
inline echelon::DecisionVector random_dv(const echelon::ScenarioConfig& cfg, std::mt19937_64& gen, double scale = 1.0) {
  const auto b = echelon::gene_bounds(cfg);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  echelon::DecisionVector dv;
  for (std::size_t i = 0; i < b.lower.size(); ++i) dv.genes.push_back(b.lower[i] + scale * u(gen) * (b.upper[i] - b.lower[i]));
  return dv;
}

}  // namespace testing_support
