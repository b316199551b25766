#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "echelon/env.hpp"
#include "echelon/pareto.hpp"
#include "echelon/rng.hpp"

namespace echelon {

/// Fully connected network with tanh on every layer, so outputs stay in [-1, 1].
struct PolicyShape {
  std::size_t input = 0;
  std::vector<std::size_t> hidden{32};
  std::size_t output = 0;

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w{input};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(output);
    return w;
  }

  std::size_t parameter_count() const {
    const auto w = widths();
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) n += w[l + 1] * w[l] + w[l + 1];
    return n;
  }

  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

inline PolicyShape policy_shape(const ScenarioConfig& cfg, std::vector<std::size_t> hidden = {32}) {
  return {observation_dim(cfg), std::move(hidden), action_dim(cfg)};
}

/// Parameters are stored layer by layer, each as a row-major weight matrix
/// (outputs x inputs) followed by the bias vector.
struct Policy {
  PolicyShape shape;
  std::vector<double> parameters;

  static Policy zeros(const PolicyShape& shape) { return {shape, std::vector<double>(shape.parameter_count(), 0.0)}; }

  /// Weights ~ N(0, 1 / fan_in), biases zero.
  static Policy random(const PolicyShape& shape, Rng& rng) {
    Policy p = zeros(shape);
    const auto w = shape.widths();
    std::size_t k = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      const double sd = 1.0 / std::sqrt(static_cast<double>(w[l]));
      for (std::size_t i = 0; i < w[l + 1] * w[l]; ++i) p.parameters[k++] = rng.normal(0.0, sd);
      k += w[l + 1];
    }
    return p;
  }

  std::vector<double> forward(std::span<const double> obs) const {
    if (obs.size() != shape.input) throw std::invalid_argument("policy input has the wrong dimensionality");
    if (parameters.size() != shape.parameter_count()) throw std::invalid_argument("policy parameter count mismatch");
    const auto w = shape.widths();
    std::vector<double> x(obs.begin(), obs.end()), y;
    const double* p = parameters.data();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      const std::size_t in = w[l], out = w[l + 1];
      const double* bias = p + out * in;
      y.assign(out, 0.0);
      for (std::size_t o = 0; o < out; ++o) {
        double s = bias[o];
        const double* row = p + o * in;
        for (std::size_t i = 0; i < in; ++i) s += row[i] * x[i];
        y[o] = std::tanh(s);
      }
      p += out * in + out;
      x.swap(y);
    }
    return x;
  }
};

/// Maps network outputs in [-1, 1] onto the action box: [0, Cap] for routes,
/// [0, |suppliers| * Cap] for manufacturers.
inline ActionVector to_action(std::span<const double> out, const ScenarioConfig& cfg) {
  const std::size_t n_mfg = cfg.echelons.manufacturers.size();
  const auto cap = static_cast<double>(cfg.capacity);
  const double mfg_upper = static_cast<double>(cfg.echelons.suppliers.size()) * cap;
  ActionVector a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double unit = 0.5 * (out[i] + 1.0);
    if (i < n_mfg) a.production.push_back(unit * mfg_upper);
    else a.shipments.push_back(unit * cap);
  }
  return a;
}

inline ActionVector act(const Policy& policy, std::span<const double> obs, const ScenarioConfig& cfg) {
  const auto out = policy.forward(obs);
  return to_action(out, cfg);
}

/// Weighted sum of bounds-normalised objectives.
inline double scalarise(const ObjectiveVector& r, const WeightVector& w, const NormalisationBounds& bounds) {
  if (w.size() != kNumObjectives) throw std::invalid_argument("weight vector must have three components");
  double s = 0.0;
  for (std::size_t b = 0; b < kNumObjectives; ++b) s += w[b] * bounds.normalise(r[b], b);
  return s;
}

}  // namespace echelon
