#pragma once

// Weak-contact and forced-relation diagnostics for maps sampled on a grid, and
// Hoelder exponent fits.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "carnot/metric.hpp"

namespace carnot {

/// Map from an axis-aligned lattice in R^k into a group model. Nodes are stored
/// row-major (last axis fastest).
class SampledMap {
 public:
  SampledMap(ModelPtr model, std::vector<int> counts, Vector lower, Vector h, std::vector<Vector> values)
      : model_(std::move(model)),
        counts_(std::move(counts)),
        lower_(std::move(lower)),
        h_(std::move(h)),
        values_(std::move(values)) {
    if (!model_) throw InputError("sampled map without model");
    if (counts_.empty()) throw InputError("sampled map needs a domain dimension >= 1");
    const auto k = static_cast<Eigen::Index>(counts_.size());
    if (lower_.size() != k || h_.size() != k) throw InputError("grid origin/spacing length differs from domain dimension");
    std::size_t total = 1;
    for (int c : counts_) {
      if (c < 1) throw InputError("grid axis with no nodes");
      total *= static_cast<std::size_t>(c);
    }
    for (Eigen::Index a = 0; a < k; ++a)
      if (!(h_[a] > 0.0)) throw InputError("grid spacing must be positive");
    if (values_.size() != total) {
      throw InputError("grid has " + std::to_string(total) + " nodes but " + std::to_string(values_.size()) +
                       " values were given");
    }
    for (const auto& v : values_) {
      if (v.size() != model_->dim()) throw InputError("sampled value has wrong length");
      if (!v.allFinite()) throw InputError("sampled value is not finite");
    }
  }

  /// Samples fn at every node.
  static SampledMap sample(ModelPtr model, std::vector<int> counts, Vector lower, Vector h,
                           const std::function<Vector(const Vector&)>& fn) {
    std::size_t total = 1;
    for (int c : counts) total *= static_cast<std::size_t>(std::max(c, 0));
    std::vector<Vector> values;
    values.reserve(total);
    SampledMap shape(model, counts, lower, h, std::vector<Vector>(total, Vector::Zero(model->dim())));
    for (std::size_t f = 0; f < total; ++f) values.push_back(fn(shape.point(shape.index(f))));
    return {std::move(model), std::move(counts), std::move(lower), std::move(h), std::move(values)};
  }

  const ModelPtr& model() const { return model_; }
  int domain_dim() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& counts() const { return counts_; }
  const Vector& lower() const { return lower_; }
  const Vector& spacing() const { return h_; }
  std::size_t node_count() const { return values_.size(); }
  const std::vector<Vector>& values() const { return values_; }

  std::size_t flat(const std::vector<int>& idx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < counts_.size(); ++a) f = f * static_cast<std::size_t>(counts_[a]) + idx[a];
    return f;
  }
  std::vector<int> index(std::size_t f) const {
    std::vector<int> idx(counts_.size());
    for (std::size_t a = counts_.size(); a-- > 0;) {
      idx[a] = static_cast<int>(f % static_cast<std::size_t>(counts_[a]));
      f /= static_cast<std::size_t>(counts_[a]);
    }
    return idx;
  }
  Vector point(const std::vector<int>& idx) const {
    Vector p(domain_dim());
    for (int a = 0; a < domain_dim(); ++a) p[a] = lower_[a] + h_[a] * idx[static_cast<std::size_t>(a)];
    return p;
  }
  bool interior(const std::vector<int>& idx) const {
    for (std::size_t a = 0; a < counts_.size(); ++a)
      if (idx[a] <= 0 || idx[a] >= counts_[a] - 1) return false;
    return true;
  }
  const Vector& value(const std::vector<int>& idx) const { return values_[flat(idx)]; }
  GroupElement element(std::size_t f) const { return {model_, values_[f]}; }

  std::vector<std::size_t> interior_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < values_.size(); ++f)
      if (interior(index(f))) out.push_back(f);
    return out;
  }

 private:
  ModelPtr model_;
  std::vector<int> counts_;
  Vector lower_;
  Vector h_;
  std::vector<Vector> values_;
};

/// Central-difference partials at an interior node, one column per axis.
inline Matrix fd_partials(const SampledMap& map, const std::vector<int>& idx) {
  if (static_cast<int>(idx.size()) != map.domain_dim()) throw InputError("node index has wrong dimension");
  if (!map.interior(idx)) throw BoundaryError("central differences need an interior node");
  Matrix out(map.model()->dim(), map.domain_dim());
  for (int a = 0; a < map.domain_dim(); ++a) {
    auto up = idx, dn = idx;
    up[static_cast<std::size_t>(a)] += 1;
    dn[static_cast<std::size_t>(a)] -= 1;
    out.col(a) = (map.value(up) - map.value(dn)) / (2.0 * map.spacing()[a]);
  }
  return out;
}

namespace detail {

/// q-quantile by linear interpolation between order statistics.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace detail

struct WeakContactReport {
  std::vector<std::size_t> nodes;  // flat indices of interior nodes
  Matrix residual;                 // nodes x axes, |omega(d_a f)|_inf / max(1, |d_a f|)
  Vector form_max;                 // worst raw value per contact form
  double max = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  std::size_t worst_node = 0;
  int worst_axis = 0;
};

inline WeakContactReport weak_contact_report(const SampledMap& map) {
  WeakContactReport rep;
  rep.nodes = map.interior_nodes();
  if (rep.nodes.empty()) throw BoundaryError("sampled map has no interior nodes");
  const GroupModel& m = *map.model();
  const int axes = map.domain_dim();
  rep.residual = Matrix::Zero(static_cast<Eigen::Index>(rep.nodes.size()), axes);
  rep.form_max = Vector::Zero(m.dim() - m.algebra().horizontal_dim());
  std::vector<double> all;
  for (std::size_t r = 0; r < rep.nodes.size(); ++r) {
    const auto idx = map.index(rep.nodes[r]);
    const Matrix d = fd_partials(map, idx);
    for (int a = 0; a < axes; ++a) {
      const Vector w = contact_residual(m, map.value(idx), d.col(a));
      if (w.size() > 0) rep.form_max = rep.form_max.cwiseMax(w.cwiseAbs());
      const double val = w.size() > 0 ? w.cwiseAbs().maxCoeff() / std::max(1.0, d.col(a).norm()) : 0.0;
      rep.residual(static_cast<Eigen::Index>(r), a) = val;
      all.push_back(val);
      if (val > rep.max) {
        rep.max = val;
        rep.worst_node = rep.nodes[r];
        rep.worst_axis = a;
      }
    }
  }
  rep.median = detail::quantile(all, 0.5);
  rep.p95 = detail::quantile(all, 0.95);
  return rep;
}

struct JetRelationReport {
  std::vector<std::size_t> nodes;
  /// Row r*axes + a holds |d_a f^{u_j} - f^{u_{j+1}} d_a f^x| for j = k-1, ..., 0.
  Matrix defect;
  Vector axis_max;
  Vector relation_max;
  double max = 0.0;
};

inline JetRelationReport jet_forced_relations(const SampledMap& map) {
  const GroupModel& m = *map.model();
  if (m.kind() != ModelKind::Jet) throw InputError("jet_forced_relations needs a map into a Jet model");
  const int k = m.jet_order();
  const int axes = map.domain_dim();
  JetRelationReport rep;
  rep.nodes = map.interior_nodes();
  if (rep.nodes.empty()) throw BoundaryError("sampled map has no interior nodes");
  rep.defect = Matrix::Zero(static_cast<Eigen::Index>(rep.nodes.size()) * axes, k);
  rep.axis_max = Vector::Zero(axes);
  rep.relation_max = Vector::Zero(k);
  for (std::size_t r = 0; r < rep.nodes.size(); ++r) {
    const auto idx = map.index(rep.nodes[r]);
    const Matrix d = fd_partials(map, idx);
    const Vector& f = map.value(idx);
    for (int a = 0; a < axes; ++a) {
      for (int t = 0; t < k; ++t) {
        const int j = k - 1 - t;
        const double v = std::abs(d(jet_index(k, j), a) - f[jet_index(k, j + 1)] * d(0, a));
        rep.defect(static_cast<Eigen::Index>(r) * axes + a, t) = v;
        rep.axis_max[a] = std::max(rep.axis_max[a], v);
        rep.relation_max[t] = std::max(rep.relation_max[t], v);
        rep.max = std::max(rep.max, v);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// test maps

inline ModelPtr jet_model(int k) { return make_model(jet(k), ModelKind::Jet); }

/// (0, x, y, 0, ..., 0) in J^k(R).
inline GroupElement sharpness_example(double x, double y, int k, ModelPtr model = nullptr) {
  if (k < 1) throw InputError("sharpness example needs k >= 1");
  if (!model) model = jet_model(k);
  if (model->kind() != ModelKind::Jet || model->jet_order() != k) throw InputError("model is not J^k(R)");
  Vector v = Vector::Zero(k + 2);
  v[jet_index(k, k)] = x;
  v[jet_index(k, k - 1)] = y;
  return {std::move(model), std::move(v)};
}

inline SampledMap sharpness_map(int k, double M, int nodes_per_axis) {
  if (nodes_per_axis < 2) throw InputError("need at least two nodes per axis");
  auto model = jet_model(k);
  const double h = 2.0 * M / (nodes_per_axis - 1);
  return SampledMap::sample(model, {nodes_per_axis, nodes_per_axis}, Vector::Constant(2, -M), Vector::Constant(2, h),
                            [&](const Vector& p) { return sharpness_example(p[0], p[1], k, model).coords(); });
}

/// Identity R^n -> model on the cube [-half_width, half_width]^n.
inline SampledMap identity_map(ModelPtr model, double half_width, int nodes_per_axis) {
  if (nodes_per_axis < 2) throw InputError("need at least two nodes per axis");
  const int n = model->dim();
  const double h = 2.0 * half_width / (nodes_per_axis - 1);
  return SampledMap::sample(model, std::vector<int>(static_cast<std::size_t>(n), nodes_per_axis),
                            Vector::Constant(n, -half_width), Vector::Constant(n, h),
                            [](const Vector& p) { return p; });
}

/// Jet prolongation t -> (t, g^(k)(t), ..., g(t)) of g = sin, a horizontal curve.
inline SampledMap jet_lift_map(int k, int nodes, double h, double t0 = 0.0) {
  auto model = jet_model(k);
  return SampledMap::sample(model, {nodes}, Vector::Constant(1, t0), Vector::Constant(1, h), [k](const Vector& p) {
    Vector v(k + 2);
    v[0] = p[0];
    for (int j = 0; j <= k; ++j) v[jet_index(k, j)] = std::sin(p[0] + j * M_PI / 2.0);
    return v;
  });
}

/// Smooth horizontal curve from the identity driven by u_i(t) = cos((i+1) t + i),
/// integrated with RK4 at `substeps` steps per grid spacing.
inline SampledMap horizontal_lift_map(ModelPtr model, int nodes, double h, int substeps = 64) {
  if (nodes < 3) throw InputError("horizontal lift needs at least three nodes");
  const GroupModel& m = *model;
  const int m1 = m.algebra().horizontal_dim();
  auto control = [m1](double t) {
    Vector u(m1);
    for (int i = 0; i < m1; ++i) u[i] = std::cos((i + 1) * t + i);
    return u;
  };
  auto f = [&](double t, const Vector& y) -> Vector { return left_invariant_frame(m, y) * control(t); };
  std::vector<Vector> values;
  Vector x = m.identity();
  values.push_back(x);
  const double dt = h / substeps;
  double t = 0.0;
  for (int node = 1; node < nodes; ++node) {
    for (int s = 0; s < substeps; ++s, t += dt) {
      const Vector k1 = f(t, x);
      const Vector k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
      const Vector k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
      const Vector k4 = f(t + dt, x + dt * k3);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = node * h;
    values.push_back(x);
  }
  return {model, {nodes}, Vector::Zero(1), Vector::Constant(1, h), std::move(values)};
}

/// t -> t e_n, moving along the last (top-layer) coordinate only.
inline SampledMap vertical_line_map(ModelPtr model, int nodes, double h) {
  const int n = model->dim();
  return SampledMap::sample(model, {nodes}, Vector::Constant(1, -0.5 * h * (nodes - 1)), Vector::Constant(1, h),
                            [n](const Vector& p) {
                              Vector v = Vector::Zero(n);
                              v[n - 1] = p[0];
                              return v;
                            });
}

// ---------------------------------------------------------------------------
// Hoelder fits

enum class HolderMetric { Box, Cc };

struct HolderOptions {
  HolderMetric metric = HolderMetric::Box;
  int bins = 20;
  double quantile = 0.95;
  int min_bin_count = 5;
  /// Only pairs with min_cells * max(h) <= |a - b| <= max_scale are used; the
  /// lower cut keeps lattice artefacts out of the envelope.
  double max_scale = 1.0;
  double min_cells = 3.0;
  std::size_t exhaustive_limit = 2000;
  std::size_t random_pairs = 100000;
  std::size_t cc_pairs = 400;  // cap for the (expensive) cc backend
  std::uint64_t seed = 0;
  CcOptions cc{};
};

struct HolderFit {
  double alpha_hat = 0.0;
  double constant_hat = 0.0;
  double alpha_stderr = 0.0;
  std::size_t pair_count = 0;
  double scale_min = 0.0;
  double scale_max = 0.0;
  int bins_used = 0;
  bool anchored = false;
  std::uint64_t seed = 0;
};

/// Fits d(f(a), f(b)) <= C |a - b|^alpha to the per-bin upper quantile of the
/// value distances over log-spaced bins of domain distance.
inline HolderFit holder_fit(const SampledMap& map, const HolderOptions& opt = {}) {
  const std::size_t nodes = map.node_count();
  if (nodes * (nodes - 1) / 2 < 100) throw InputError("Hoelder fit needs at least 100 node pairs");
  if (opt.bins < 2) throw InputError("Hoelder fit needs at least two bins");

  auto domain_distance = [&](std::size_t a, std::size_t b) {
    return (map.point(map.index(a)) - map.point(map.index(b))).norm();
  };
  const double min_scale = opt.min_cells * map.spacing().maxCoeff();
  auto in_window = [&](double d) { return d >= min_scale && d <= opt.max_scale; };

  // First points are anchored where the whole max_scale ball stays inside the
  // grid, so every pair direction is equally available at every scale.
  std::vector<std::size_t> anchors;
  for (std::size_t f = 0; f < nodes; ++f) {
    const auto idx = map.index(f);
    bool inside = true;
    for (int a = 0; a < map.domain_dim() && inside; ++a) {
      const double lo_gap = idx[static_cast<std::size_t>(a)] * map.spacing()[a];
      const double hi_gap = (map.counts()[static_cast<std::size_t>(a)] - 1 - idx[static_cast<std::size_t>(a)]) * map.spacing()[a];
      inside = std::min(lo_gap, hi_gap) >= opt.max_scale;
    }
    if (inside) anchors.push_back(f);
  }
  const bool anchored = !anchors.empty();
  if (!anchored) {
    anchors.resize(nodes);
    std::iota(anchors.begin(), anchors.end(), std::size_t{0});
  }

  std::vector<std::pair<std::size_t, std::size_t>> kept;
  std::mt19937_64 rng(opt.seed);
  if (anchors.size() * nodes <= opt.exhaustive_limit * opt.exhaustive_limit) {
    for (std::size_t a : anchors)
      for (std::size_t b = 0; b < nodes; ++b)
        if ((anchored ? a != b : a < b) && in_window(domain_distance(a, b))) kept.emplace_back(a, b);
  } else {
    // Uniform pairs, rejected outside the scale window.
    std::uniform_int_distribution<std::size_t> pick_a(0, anchors.size() - 1), pick_b(0, nodes - 1);
    const std::size_t max_draws = 50 * opt.random_pairs;
    for (std::size_t draw = 0; draw < max_draws && kept.size() < opt.random_pairs; ++draw) {
      const std::size_t a = anchors[pick_a(rng)], b = pick_b(rng);
      if (a != b && in_window(domain_distance(a, b))) kept.emplace_back(a, b);
    }
  }
  if (kept.size() < 100) {
    throw InputError("Hoelder fit needs at least 100 node pairs in the scale window, got " +
                     std::to_string(kept.size()));
  }

  std::vector<double> dx, dy;
  dx.reserve(kept.size());
  if (opt.metric == HolderMetric::Cc && kept.size() > opt.cc_pairs) {
    std::shuffle(kept.begin(), kept.end(), rng);
    kept.resize(opt.cc_pairs);
  }
  bool any_motion = false;
  for (const auto& [a, b] : kept) {
    const GroupElement fa = map.element(a), fb = map.element(b);
    double d = 0.0;
    if (opt.metric == HolderMetric::Box) {
      d = box_quasi_distance(fa, fb);
    } else {
      d = cc_upper_bound(fa, fb, opt.cc).length;
    }
    dx.push_back(domain_distance(a, b));
    dy.push_back(d);
    any_motion = any_motion || d > 0.0;
  }
  if (!any_motion) throw NumericError("Hoelder exponent undefined: sampled map is constant on all pairs");

  const double lo = *std::min_element(dx.begin(), dx.end());
  const double hi = *std::max_element(dx.begin(), dx.end());
  if (!(hi > lo)) throw NumericError("Hoelder exponent undefined: all pairs at one distance");
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<std::vector<std::size_t>> bucket(static_cast<std::size_t>(opt.bins));
  for (std::size_t p = 0; p < dx.size(); ++p) {
    auto b = static_cast<int>((std::log(dx[p]) - llo) / (lhi - llo) * opt.bins);
    b = std::clamp(b, 0, opt.bins - 1);
    bucket[static_cast<std::size_t>(b)].push_back(p);
  }

  // Each pass takes the per-bin quantile of values rescaled to the bin centre
  // under the previous slope, which removes the bias from the spread of
  // distances inside a bin. The first pass uses the raw values.
  std::vector<double> xs, ys;
  double slope = 0.0, intercept = 0.0;
  auto regress = [&] {
    const auto cnt = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / cnt;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / cnt;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    slope = sxy / sxx;
    intercept = my - slope * mx;
    return sxx;
  };
  double sxx = 0.0;
  for (int pass = 0; pass < 6; ++pass) {
    xs.clear();
    ys.clear();
    for (const auto& members : bucket) {
      if (static_cast<int>(members.size()) < opt.min_bin_count) continue;
      double xc = 0.0;
      for (std::size_t p : members) xc += std::log(dx[p]);
      xc /= static_cast<double>(members.size());
      std::vector<double> v;
      v.reserve(members.size());
      for (std::size_t p : members) v.push_back(pass == 0 ? dy[p] : dy[p] * std::exp(slope * (xc - std::log(dx[p]))));
      const double q = detail::quantile(std::move(v), opt.quantile);
      if (!(q > 0.0)) continue;
      xs.push_back(xc);
      ys.push_back(std::log(q));
    }
    if (xs.size() < 3) throw NumericError("Hoelder exponent undefined: fewer than three populated distance bins");
    sxx = regress();
  }

  HolderFit fit;
  fit.alpha_hat = slope;
  fit.constant_hat = std::exp(intercept);
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - intercept - slope * xs[i];
    sse += r * r;
  }
  fit.alpha_stderr = xs.size() > 2 ? std::sqrt(sse / (static_cast<double>(xs.size()) - 2.0) / sxx) : 0.0;
  fit.pair_count = dx.size();
  fit.scale_min = lo;
  fit.scale_max = hi;
  fit.bins_used = static_cast<int>(xs.size());
  fit.anchored = anchored;
  fit.seed = opt.seed;
  if (!std::isfinite(fit.alpha_hat)) throw NumericError("Hoelder exponent undefined: non-finite slope");
  return fit;
}

}  // namespace carnot
