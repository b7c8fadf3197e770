#pragma once

// Maps between group models of one algebra and numeric checks of the
// properties a Carnot isomorphism must have.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "carnot/metric.hpp"

namespace carnot {

struct GroupMap {
  std::string name;
  ModelPtr source;
  ModelPtr target;
  std::function<Vector(const Vector&)> forward;
  std::function<Vector(const Vector&)> inverse;  // may be empty

  Vector operator()(const Vector& x) const { return forward(x); }
};

/// exp^{-1} o Phi: second-kind coordinates to first-kind coordinates.
inline GroupMap second_to_first_map(const AlgebraPtr& g) {
  GroupMap m;
  m.name = "second-to-first";
  m.source = make_model(g, ModelKind::SecondKind);
  m.target = make_model(g, ModelKind::FirstKind);
  m.forward = [g](const Vector& x) { return second_to_first(*g, x); };
  m.inverse = [g](const Vector& x) { return first_to_second(*g, x); };
  return m;
}

inline GroupMap first_to_second_map(const AlgebraPtr& g) {
  GroupMap m = second_to_first_map(g);
  std::swap(m.source, m.target);
  std::swap(m.forward, m.inverse);
  m.name = "first-to-second";
  return m;
}

inline GroupMap identity_group_map(const ModelPtr& model) {
  auto id = [](const Vector& x) { return x; };
  return {"identity", model, model, id, id};
}

/// Linear map exchanging basis indices a and b (0-based).
inline GroupMap swap_coordinates_map(const ModelPtr& model, int a, int b) {
  const int n = model->dim();
  if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("swap index out of range");
  auto swap = [a, b](const Vector& x) {
    Vector y = x;
    std::swap(y[a], y[b]);
    return y;
  };
  return {"swap(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")", model, model, swap, swap};
}

/// Exchanges the first basis vector of layer 1 with the first of the top layer.
inline GroupMap layer_swap_map(const ModelPtr& model) {
  const auto& g = model->algebra();
  if (g.step() < 2) throw InputError("layer swap needs at least two layers");
  GroupMap m = swap_coordinates_map(model, 0, g.layer_offset(g.step()));
  m.name = "layer-swap";
  return m;
}

/// B_1 -> B_1 + A_1^p on the first layer-2 coordinate. p = 1 breaks dilation
/// homogeneity; p = 2 keeps it (both scale by eps^2).
inline GroupMap shear_map(const ModelPtr& model, int power) {
  const auto& g = model->algebra();
  if (g.step() < 2) throw InputError("shear needs at least two layers");
  const int b = g.layer_offset(2);
  auto fwd = [b, power](const Vector& x) {
    Vector y = x;
    y[b] += std::pow(x[0], power);
    return y;
  };
  auto inv = [b, power](const Vector& x) {
    Vector y = x;
    y[b] -= std::pow(x[0], power);
    return y;
  };
  return {"shear^" + std::to_string(power), model, model, fwd, inv};
}

/// Points with |a^j_k| <= radius^j (so box_norm <= radius).
inline std::vector<Vector> sample_box_ball(const StratifiedAlgebra& g, std::size_t count, std::uint64_t seed,
                                           double radius = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vector v(g.dim());
    for (int i = 0; i < g.dim(); ++i) v[i] = u(rng) * std::pow(radius, g.layer_of(i));
    out.push_back(v);
  }
  return out;
}

namespace detail {
inline double rel_dev(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1.0, b.norm()); }
}  // namespace detail

/// max |phi(delta_eps g) - delta_eps phi(g)| / max(1, |delta_eps phi(g)|).
inline double check_dilation_commutation(const GroupMap& map, const std::vector<Vector>& samples,
                                         const std::vector<double>& eps_set) {
  double worst = 0.0;
  for (double eps : eps_set) {
    DilationFactor e(eps);
    for (const auto& x : samples) {
      const Vector lhs = map.forward(map.source->dilate(e.value(), x));
      const Vector rhs = map.target->dilate(e.value(), map.forward(x));
      worst = std::max(worst, detail::rel_dev(lhs, rhs));
    }
  }
  return worst;
}

/// max |phi(a b) - phi(a) phi(b)| / max(1, |phi(a) phi(b)|) over consecutive sample pairs.
inline double check_homomorphism(const GroupMap& map, const std::vector<Vector>& samples) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
    const Vector& a = samples[i];
    const Vector& b = samples[i + 1];
    const Vector lhs = map.forward(map.source->multiply(a, b));
    const Vector rhs = map.target->multiply(map.forward(a), map.forward(b));
    worst = std::max(worst, detail::rel_dev(lhs, rhs));
  }
  return worst;
}

struct LeakageReport {
  Matrix jacobian;     // d phi at the identity
  Matrix block_norms;  // (target layer, source layer) Frobenius norms
  double leakage = 0.0;  // largest off-diagonal block norm
};

/// Central-difference linearisation at the identity split into layer blocks.
inline LeakageReport strata_preservation_check(const GroupMap& map, double h = 1e-5) {
  const auto& gs = map.source->algebra();
  const auto& gt = map.target->algebra();
  const int n = gs.dim();
  if (gt.step() != gs.step()) throw InputError("source and target have different step");
  LeakageReport rep;
  rep.jacobian = Matrix(gt.dim(), n);
  const Vector e = map.source->identity();
  for (int j = 0; j < n; ++j) {
    Vector up = e, dn = e;
    up[j] += h;
    dn[j] -= h;
    rep.jacobian.col(j) = (map.forward(up) - map.forward(dn)) / (2.0 * h);
  }
  const int r = gs.step();
  rep.block_norms = Matrix::Zero(r, r);
  for (int i = 1; i <= r; ++i)
    for (int j = 1; j <= r; ++j) {
      const double v =
          rep.jacobian.block(gt.layer_offset(i), gs.layer_offset(j), gt.layer_dim(i), gs.layer_dim(j)).norm();
      rep.block_norms(i - 1, j - 1) = v;
      if (i != j) rep.leakage = std::max(rep.leakage, v);
    }
  return rep;
}

/// max over samples of |inv(fwd(x)) - x| and |fwd(inv(x)) - x|, relative.
inline double check_round_trip(const GroupMap& map, const std::vector<Vector>& samples) {
  if (!map.inverse) throw InputError("map '" + map.name + "' has no inverse");
  double worst = 0.0;
  for (const auto& x : samples) {
    worst = std::max(worst, detail::rel_dev(map.inverse(map.forward(x)), x));
    worst = std::max(worst, detail::rel_dev(map.forward(map.inverse(x)), x));
  }
  return worst;
}

struct BilipschitzScan {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// Ratios box_qd(phi a, phi b) / box_qd(a, b) over consecutive pairs of samples.
inline BilipschitzScan bilipschitz_scan(const GroupMap& map, const std::vector<Vector>& samples) {
  BilipschitzScan out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < samples.size(); i += 2) {
    const GroupElement a(map.source, samples[i]), b(map.source, samples[i + 1]);
    const GroupElement fa(map.target, map.forward(samples[i])), fb(map.target, map.forward(samples[i + 1]));
    const double d = box_quasi_distance(a, b);
    if (d == 0.0) continue;
    const double ratio = box_quasi_distance(fa, fb) / d;
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.pairs;
  }
  if (out.pairs == 0) out.min_ratio = 0.0;
  return out;
}

}  // namespace carnot
