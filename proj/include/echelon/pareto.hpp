#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace echelon {

/// A point in objective space; every component is maximised.
using Point = std::vector<double>;

/// Pareto dominance under maximisation: a >= b everywhere and a > b somewhere.
inline bool dominates(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: dimension mismatch");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

/// Objective vectors with opaque solution handles.
struct Front {
  std::vector<Point> points;
  std::vector<std::int64_t> ids;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  void push_back(Point p, std::int64_t id) {
    points.push_back(std::move(p));
    ids.push_back(id);
  }

  friend bool operator==(const Front&, const Front&) = default;
};

inline Front make_front(std::vector<Point> points) {
  Front f;
  f.points = std::move(points);
  f.ids.resize(f.points.size());
  std::iota(f.ids.begin(), f.ids.end(), 0);
  return f;
}

/// Non-dominated subset in order of first occurrence; of several identical
/// points only the first is kept.
inline Front pareto_filter(const Front& in) {
  Front out;
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < n && keep; ++j) {
      if (j == i) continue;
      if (dominates(in.points[j], in.points[i])) keep = false;
      else if (j < i && in.points[j] == in.points[i]) keep = false;
    }
    if (keep) out.push_back(in.points[i], in.ids[i]);
  }
  return out;
}

inline Front pareto_filter(const std::vector<Point>& points) { return pareto_filter(make_front(points)); }

/// Incrementally maintained non-dominated set.
class ParetoArchive {
 public:
  /// Inserts unless dominated by or equal to a member; evicts members the new
  /// point dominates. Returns whether the point was added.
  bool insert(const Point& p, std::int64_t id) {
    for (const auto& q : front_.points)
      if (q == p || dominates(q, p)) return false;
    Front kept;
    for (std::size_t i = 0; i < front_.size(); ++i)
      if (!dominates(p, front_.points[i])) kept.push_back(std::move(front_.points[i]), front_.ids[i]);
    kept.push_back(p, id);
    front_ = std::move(kept);
    return true;
  }

  const Front& front() const { return front_; }
  std::size_t size() const { return front_.size(); }
  bool empty() const { return front_.empty(); }

 private:
  Front front_;
};

inline Front estimate_true_front(const std::vector<Front>& runs) {
  Front all;
  for (const auto& f : runs)
    for (std::size_t i = 0; i < f.size(); ++i) all.push_back(f.points[i], f.ids[i]);
  return pareto_filter(all);
}

// ---------------------------------------------------------------------------
// Hypervolume

namespace detail {

// Volume of the union of boxes [0, p] for p in pts (all components > 0),
// by slicing along the last coordinate.
inline double hv_recursive(std::vector<Point> pts, std::size_t dim) {
  if (pts.empty()) return 0.0;
  if (dim == 1) {
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, p[0]);
    return m;
  }
  if (dim == 2) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a[0] > b[0]; });
    double vol = 0.0, best_y = 0.0;
    for (const auto& p : pts) {
      if (p[1] > best_y) {
        vol += p[0] * (p[1] - best_y);
        best_y = p[1];
      }
    }
    return vol;
  }
  const std::size_t last = dim - 1;
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return a[last] > b[last]; });
  double vol = 0.0;
  std::vector<Point> slice;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    slice.push_back(pts[i]);
    const double next = i + 1 < pts.size() ? pts[i + 1][last] : 0.0;
    const double depth = pts[i][last] - next;
    if (depth > 0.0) vol += depth * hv_recursive(slice, last);
  }
  return vol;
}

}  // namespace detail

struct HypervolumeResult {
  double value = 0.0;
  std::vector<std::size_t> excluded;  // indices of points not strictly better than the reference
};

/// Exact dominated hypervolume with respect to `reference`, on raw values.
inline HypervolumeResult hypervolume_report(const std::vector<Point>& points, const Point& reference) {
  HypervolumeResult res;
  std::vector<Point> shifted;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    if (p.size() != reference.size()) throw std::invalid_argument("hypervolume: dimension mismatch");
    Point q(p.size());
    bool inside = true;
    for (std::size_t b = 0; b < p.size(); ++b) {
      q[b] = p[b] - reference[b];
      if (!(q[b] > 0.0)) inside = false;
    }
    if (inside) shifted.push_back(std::move(q));
    else res.excluded.push_back(i);
  }
  if (!shifted.empty()) res.value = detail::hv_recursive(std::move(shifted), reference.size());
  return res;
}

inline double hypervolume(const std::vector<Point>& points, const Point& reference) {
  return hypervolume_report(points, reference).value;
}

inline double hypervolume(const Front& front, const Point& reference) {
  return hypervolume_report(front.points, reference).value;
}

// ---------------------------------------------------------------------------
// Normalisation and the utility-based indicators

/// Per-objective (min, max) used to map values into [0, 1].
struct NormalisationBounds {
  std::vector<double> min;
  std::vector<double> max;

  static NormalisationBounds identity(std::size_t dim) {
    return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
  }

  bool valid() const {
    if (min.size() != max.size()) return false;
    for (std::size_t b = 0; b < min.size(); ++b)
      if (!(min[b] < max[b])) return false;
    return true;
  }

  double normalise(double v, std::size_t b) const { return (v - min[b]) / (max[b] - min[b]); }

  Point normalise(const Point& p) const {
    Point q(p.size());
    for (std::size_t b = 0; b < p.size(); ++b) q[b] = normalise(p[b], b);
    return q;
  }
};

/// Bounds spanning the given point sets; a zero-width objective is widened to [v, v + 1].
inline NormalisationBounds bounds_of(const std::vector<const std::vector<Point>*>& sets, std::size_t dim) {
  NormalisationBounds nb{std::vector<double>(dim, INFINITY), std::vector<double>(dim, -INFINITY)};
  for (const auto* s : sets)
    for (const auto& p : *s)
      for (std::size_t b = 0; b < dim; ++b) {
        nb.min[b] = std::min(nb.min[b], p[b]);
        nb.max[b] = std::max(nb.max[b], p[b]);
      }
  for (std::size_t b = 0; b < dim; ++b) {
    if (!std::isfinite(nb.min[b])) nb.min[b] = 0.0, nb.max[b] = 1.0;
    if (!(nb.min[b] < nb.max[b])) nb.max[b] = nb.min[b] + 1.0;
  }
  return nb;
}

using WeightVector = std::vector<double>;

/// Linear utility of a normalised point.
inline double utility(const Point& normalised, const WeightVector& w) {
  double u = 0.0;
  for (std::size_t b = 0; b < w.size(); ++b) u += w[b] * normalised[b];
  return u;
}

/// Expected utility: mean over weights of the best utility on the front.
inline double eum(const std::vector<Point>& front, const std::vector<WeightVector>& weights,
                  const NormalisationBounds& bounds) {
  if (front.empty()) throw std::invalid_argument("eum: empty front");
  if (weights.empty()) throw std::invalid_argument("eum: empty weight set");
  std::vector<Point> normalised;
  for (const auto& p : front) normalised.push_back(bounds.normalise(p));
  double total = 0.0;
  for (const auto& w : weights) {
    double best = -INFINITY;
    for (const auto& q : normalised) best = std::max(best, utility(q, w));
    total += best;
  }
  return total / static_cast<double>(weights.size());
}

/// Mean squared gap between neighbours along each objective, on normalised
/// values. Undefined (nullopt) for fewer than two points.
inline std::optional<double> sparsity(const std::vector<Point>& front, const NormalisationBounds& bounds) {
  if (front.size() < 2) return std::nullopt;
  const std::size_t dim = front.front().size();
  double total = 0.0;
  std::vector<double> column(front.size());
  for (std::size_t b = 0; b < dim; ++b) {
    for (std::size_t i = 0; i < front.size(); ++i) column[i] = bounds.normalise(front[i][b], b);
    std::sort(column.begin(), column.end());
    for (std::size_t i = 0; i + 1 < column.size(); ++i) total += (column[i + 1] - column[i]) * (column[i + 1] - column[i]);
  }
  return total / static_cast<double>(front.size() - 1);
}

inline std::optional<double> sparsity(const std::vector<Point>& front) {
  if (front.empty()) return std::nullopt;
  return sparsity(front, NormalisationBounds::identity(front.front().size()));
}

namespace detail {

inline double distance_to_set(const Point& x, const std::vector<Point>& set) {
  double best = INFINITY;
  for (const auto& y : set) {
    double d2 = 0.0;
    for (std::size_t b = 0; b < x.size(); ++b) d2 += (x[b] - y[b]) * (x[b] - y[b]);
    best = std::min(best, d2);
  }
  return std::sqrt(best);
}

inline double power_mean_distance(const std::vector<Point>& from, const std::vector<Point>& to, double p) {
  double acc = 0.0;
  for (const auto& x : from) acc += std::pow(distance_to_set(x, to), p);
  return std::pow(acc / static_cast<double>(from.size()), 1.0 / p);
}

}  // namespace detail

struct DistanceIndicators {
  double gd = 0.0;
  double igd = 0.0;
  double ahd = 0.0;
};

/// GD_p(front, truth), IGD_p(truth, front) and their maximum (averaged
/// Hausdorff distance), Euclidean on normalised values.
inline DistanceIndicators distance_indicators(const std::vector<Point>& front, const std::vector<Point>& truth,
                                              const NormalisationBounds& bounds, double p = 2.0) {
  if (front.empty() || truth.empty()) throw std::invalid_argument("ahd: empty input");
  std::vector<Point> x, y;
  for (const auto& q : front) x.push_back(bounds.normalise(q));
  for (const auto& q : truth) y.push_back(bounds.normalise(q));
  DistanceIndicators d;
  d.gd = detail::power_mean_distance(x, y, p);
  d.igd = detail::power_mean_distance(y, x, p);
  d.ahd = std::max(d.gd, d.igd);
  return d;
}

inline double ahd(const std::vector<Point>& front, const std::vector<Point>& truth, const NormalisationBounds& bounds,
                  double p = 2.0) {
  return distance_indicators(front, truth, bounds, p).ahd;
}

inline double ahd(const std::vector<Point>& front, const std::vector<Point>& truth, double p = 2.0) {
  if (front.empty()) throw std::invalid_argument("ahd: empty input");
  return ahd(front, truth, NormalisationBounds::identity(front.front().size()), p);
}

// ---------------------------------------------------------------------------
// Das-Dennis simplex-lattice weights

/// All weight vectors with components in {0, 1/H, ..., 1} summing to one, in
/// ascending lexicographic order. There are C(H + m - 1, m - 1) of them.
inline std::vector<WeightVector> das_dennis(std::size_t objectives, std::size_t partitions) {
  if (objectives < 1) throw std::invalid_argument("das_dennis: need at least one objective");
  if (partitions < 1) throw std::invalid_argument("das_dennis: need at least one partition");
  std::vector<WeightVector> out;
  std::vector<std::size_t> counts(objectives, 0);
  const auto H = static_cast<double>(partitions);
  auto emit = [&](auto&& self, std::size_t idx, std::size_t left) -> void {
    if (idx + 1 == objectives) {
      counts[idx] = left;
      WeightVector w(objectives);
      for (std::size_t b = 0; b < objectives; ++b) w[b] = static_cast<double>(counts[b]) / H;
      out.push_back(std::move(w));
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[idx] = c;
      self(self, idx + 1, left - c);
    }
  };
  emit(emit, 0, partitions);
  return out;
}

}  // namespace echelon

namespace echelon {

/// Bounds for tracking a single run over time: from the reference point up to
/// the componentwise maximum of the points seen so far.
inline NormalisationBounds reference_bounds(const Point& reference, const std::vector<Point>& points) {
  NormalisationBounds nb{reference, reference};
  for (const auto& p : points)
    for (std::size_t b = 0; b < p.size(); ++b) nb.max[b] = std::max(nb.max[b], p[b]);
  for (std::size_t b = 0; b < nb.min.size(); ++b)
    if (!(nb.min[b] < nb.max[b])) nb.max[b] = nb.min[b] + 1.0;
  return nb;
}

struct IndicatorSnapshot {
  double hypervolume = 0.0;
  std::optional<double> sparsity;
  std::optional<double> eum;
};

inline IndicatorSnapshot indicator_snapshot(const std::vector<Point>& front, const Point& reference,
                                            const std::vector<WeightVector>& eum_weights) {
  IndicatorSnapshot s;
  s.hypervolume = hypervolume(front, reference);
  if (front.empty()) return s;
  const NormalisationBounds nb = reference_bounds(reference, front);
  s.sparsity = sparsity(front, nb);
  if (!eum_weights.empty()) s.eum = eum(front, eum_weights, nb);
  return s;
}

}  // namespace echelon

namespace echelon {

/// All indicators for one front against a reference front.
struct MetricsRecord {
  double hypervolume = 0.0;
  std::optional<double> eum;
  std::optional<double> sparsity;
  std::optional<double> gd;
  std::optional<double> igd;
  std::optional<double> ahd;
  std::size_t n_points = 0;
};

/// Hypervolume on raw values against `reference`; the other indicators on
/// values normalised by `bounds`, or by the span of front and truth together
/// when no bounds are given.
inline MetricsRecord compute_metrics(const std::vector<Point>& front, const std::vector<Point>& truth,
                                     const Point& reference, const std::vector<WeightVector>& eum_weights,
                                     std::optional<NormalisationBounds> bounds = std::nullopt) {
  MetricsRecord m;
  m.n_points = front.size();
  m.hypervolume = hypervolume(front, reference);
  const NormalisationBounds nb = bounds ? *bounds : bounds_of({&front, &truth}, reference.size());
  if (!front.empty()) {
    if (!eum_weights.empty()) m.eum = eum(front, eum_weights, nb);
    m.sparsity = sparsity(front, nb);
  }
  if (!front.empty() && !truth.empty()) {
    const DistanceIndicators d = distance_indicators(front, truth, nb);
    m.gd = d.gd;
    m.igd = d.igd;
    m.ahd = d.ahd;
  }
  return m;
}

}  // namespace echelon
