#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace echelon {

inline constexpr std::size_t kNumObjectives = 3;

/// (profit, -emission, -SL inequality). Every component is maximised.
struct ObjectiveVector {
  double profit = 0.0;
  double neg_emission = 0.0;
  double neg_sl_inequality = 0.0;

  double& operator[](std::size_t i) {
    return i == 0 ? profit : (i == 1 ? neg_emission : neg_sl_inequality);
  }
  double operator[](std::size_t i) const {
    return i == 0 ? profit : (i == 1 ? neg_emission : neg_sl_inequality);
  }

  std::vector<double> to_point() const { return {profit, neg_emission, neg_sl_inequality}; }

  static ObjectiveVector from_point(const std::vector<double>& p) {
    return {p.at(0), p.at(1), p.at(2)};
  }

  bool finite() const {
    return std::isfinite(profit) && std::isfinite(neg_emission) && std::isfinite(neg_sl_inequality);
  }

  ObjectiveVector& operator+=(const ObjectiveVector& o) {
    profit += o.profit;
    neg_emission += o.neg_emission;
    neg_sl_inequality += o.neg_sl_inequality;
    return *this;
  }
  ObjectiveVector& operator*=(double s) {
    profit *= s;
    neg_emission *= s;
    neg_sl_inequality *= s;
    return *this;
  }
  friend ObjectiveVector operator+(ObjectiveVector a, const ObjectiveVector& b) { return a += b; }
  friend ObjectiveVector operator*(ObjectiveVector a, double s) { return a *= s; }
  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

}  // namespace echelon
