#pragma once

// Box quasi-norm, horizontal frames and contact forms, horizontal paths, and
// upper bounds for the Carnot-Caratheodory distance.
//
// The compatible basis is taken orthonormal, so the horizontal speed of a path
// driven by controls u in the left-invariant frame is |u|.

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>
#include <vector>

#include "carnot/group_models.hpp"

namespace carnot {

// ---------------------------------------------------------------------------
// box geometry

/// max_{j,k} |a^j_k|^{1/j} over the layer blocks of `v`.
inline double box_norm(const StratifiedAlgebra& g, const Vector& v) {
  double out = 0.0;
  for (int i = 0; i < g.dim(); ++i) {
    const double a = std::abs(v[i]);
    if (a == 0.0) continue;
    const int j = g.layer_of(i);
    out = std::max(out, j == 1 ? a : std::pow(a, 1.0 / j));
  }
  return out;
}

inline double box_norm(const GroupElement& a) { return box_norm(a.algebra(), a.coords()); }

/// box_norm(a^{-1} b); left-invariant, symmetric only up to a constant.
inline double box_quasi_distance(const GroupElement& a, const GroupElement& b) {
  check_same_model(a, b);
  const GroupModel& m = *a.model();
  return box_norm(m.algebra(), m.multiply(m.inverse(a.coords()), b.coords()));
}

// ---------------------------------------------------------------------------
// frames

namespace detail {

/// Taylor coefficients of z/(1 - e^{-z}) (Bernoulli numbers with B_1 = +1/2).
inline const std::vector<double>& dexp_coefficients(int count) {
  static std::mutex mu;
  static std::vector<double> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) < count) {
    // (1 - e^{-z})/z = sum_m (-1)^m z^m/(m+1)!, so b_n = -sum_{j<n} b_j c_{n-j}.
    std::vector<Rational> c{Rational(1)};
    Rational fact(1);
    for (int m = 1; m < count; ++m) {
      fact *= Rational(m + 1);
      c.push_back(Rational(m % 2 == 0 ? 1 : -1) / fact);
    }
    std::vector<Rational> b{Rational(1)};
    for (int n = 1; n < count; ++n) {
      Rational s(0);
      for (int j = 0; j < n; ++j) s += b[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(n - j)];
      b.push_back(-s);
    }
    cache.clear();
    for (const auto& r : b) cache.push_back(r.to_double());
  }
  return cache;
}

/// d/dt log(exp(p) exp(t u)) at t = 0, i.e. sum_n b_n ad_p^n u.
inline Vector first_kind_translate(const StratifiedAlgebra& g, const Vector& p, const Vector& u) {
  const auto& b = dexp_coefficients(g.step());
  Vector term = u;
  Vector out = u;
  for (int n = 1; n < g.step(); ++n) {
    term = bracket(g, p, term);
    if (b[static_cast<std::size_t>(n)] != 0.0) out += b[static_cast<std::size_t>(n)] * term;
  }
  return out;
}

}  // namespace detail

/// d/dt (p * (t e_j)) at t = 0 for the listed columns, by central differences
/// with Richardson extrapolation. The product is polynomial of degree <= step
/// in t, so ceil(step/2)+1 levels remove the truncation error entirely.
inline Matrix translation_jacobian_by_differences(const GroupModel& m, const Vector& p, int columns) {
  const int n = m.dim();
  const int levels = (m.algebra().step() + 1) / 2 + 1;
  Matrix out(n, columns);
  for (int j = 0; j < columns; ++j) {
    std::vector<Vector> table;
    double h = 0.5;
    for (int l = 0; l < levels; ++l, h *= 0.5) {
      Vector e = Vector::Zero(n);
      e[j] = h;
      const Vector plus = m.multiply(p, e);
      e[j] = -h;
      const Vector minus = m.multiply(p, e);
      table.push_back((plus - minus) / (2.0 * h));
    }
    for (int l = 1; l < levels; ++l) {
      const double f = std::pow(4.0, l);
      for (int t = levels - 1; t >= l; --t)
        table[static_cast<std::size_t>(t)] =
            (f * table[static_cast<std::size_t>(t)] - table[static_cast<std::size_t>(t - 1)]) / (f - 1.0);
    }
    out.col(j) = table.back();
  }
  return out;
}

/// Full n x n differential of left translation by p at the identity.
inline Matrix translation_jacobian(const GroupModel& m, const Vector& p) {
  const int n = m.dim();
  switch (m.kind()) {
    case ModelKind::FirstKind:
    case ModelKind::Step2Explicit:
    case ModelKind::Step3Explicit: {
      Matrix out(n, n);
      for (int j = 0; j < n; ++j) out.col(j) = detail::first_kind_translate(m.algebra(), p, Vector::Unit(n, j));
      return out;
    }
    case ModelKind::Jet: {
      const int k = m.jet_order();
      Matrix out = Matrix::Identity(n, n);
      // p * (t,0,...,0): w_s gains sum_{j>s} u_j t^{j-s}/(j-s)!
      for (int s = 0; s < k; ++s) out(jet_index(k, s), 0) = p[jet_index(k, s + 1)];
      return out;
    }
    case ModelKind::SecondKind: return translation_jacobian_by_differences(m, p, n);
  }
  throw InternalError("unknown model");
}

/// Left-invariant horizontal frame at p, one column per layer-1 basis vector.
inline Matrix left_invariant_frame(const GroupModel& m, const Vector& p) {
  const int n = m.dim();
  const int m1 = m.algebra().horizontal_dim();
  switch (m.kind()) {
    case ModelKind::Jet: {
      const int k = m.jet_order();
      Matrix out = Matrix::Zero(n, 2);
      out(0, 0) = 1.0;
      for (int s = 0; s < k; ++s) out(jet_index(k, s), 0) = p[jet_index(k, s + 1)];
      out(1, 1) = 1.0;
      return out;
    }
    case ModelKind::Step2Explicit:
    case ModelKind::Step3Explicit: {
      const int m2 = m.m2(), m3 = m.m3();
      Matrix out = Matrix::Zero(n, m1);
      for (int i = 0; i < m1; ++i) {
        out(i, i) = 1.0;
        Vector sigma = Vector::Zero(m2);  // sigma_k = sum_j alpha_k^{ji} A_j
        for (int k = 0; k < m2; ++k)
          for (int j = 0; j < m1; ++j) sigma[k] += m.alpha(k, j, i) * p[j];
        out.block(m1, i, m2, 1) = 0.5 * sigma;
        for (int c = 0; c < m3; ++c) {
          double v = 0.0;
          for (int j = 0; j < m2; ++j) v -= 0.5 * p[m1 + j] * m.beta(c, i, j);
          for (int l = 0; l < m1; ++l)
            for (int k = 0; k < m2; ++k) v += p[l] * sigma[k] * m.beta(c, l, k) / 12.0;
          out(m1 + m2 + c, i) = v;
        }
      }
      return out;
    }
    case ModelKind::FirstKind: {
      Matrix out(n, m1);
      for (int i = 0; i < m1; ++i) out.col(i) = detail::first_kind_translate(m.algebra(), p, Vector::Unit(n, i));
      return out;
    }
    case ModelKind::SecondKind: return translation_jacobian_by_differences(m, p, m1);
  }
  throw InternalError("unknown model");
}

inline Matrix left_invariant_frame(const GroupElement& p) { return left_invariant_frame(*p.model(), p.coords()); }

/// Values of the n - m1 contact forms at p on the tangent vector v.
///
/// Jet: omega_i = du_i - u_{i+1} dx, listed i = k-1, ..., 0. Step2/Step3: the
/// forms dB_k - ... and dC_m - ... dual to the explicit frame. First/second
/// kind: the vertical rows of the inverse translation Jacobian.
inline Vector contact_residual(const GroupModel& m, const Vector& p, const Vector& v) {
  const int n = m.dim();
  if (v.size() != n) throw InputError("tangent vector has wrong length");
  const int m1 = m.algebra().horizontal_dim();
  switch (m.kind()) {
    case ModelKind::Jet: {
      const int k = m.jet_order();
      Vector out(k);
      for (int t = 0; t < k; ++t) {
        const int i = k - 1 - t;
        out[t] = v[jet_index(k, i)] - p[jet_index(k, i + 1)] * v[0];
      }
      return out;
    }
    case ModelKind::Step2Explicit:
    case ModelKind::Step3Explicit: {
      const Matrix frame = left_invariant_frame(m, p);
      return v.tail(n - m1) - frame.bottomRows(n - m1) * v.head(m1);
    }
    case ModelKind::FirstKind:
    case ModelKind::SecondKind: {
      const Matrix jac = translation_jacobian(m, p);
      const Vector coeffs = jac.triangularView<Eigen::Lower>().solve(v);
      return coeffs.tail(n - m1);
    }
  }
  throw InternalError("unknown model");
}

inline Vector contact_residual(const GroupElement& p, const Vector& v) {
  return contact_residual(*p.model(), p.coords(), v);
}

// ---------------------------------------------------------------------------
// horizontal paths

/// Piecewise-constant horizontal control on N equal subintervals of [0,1].
struct HorizontalPath {
  Matrix controls;  // N x m1
  GroupElement start;
  int integrator_steps = 16;

  HorizontalPath(Matrix u, GroupElement s, int substeps = 16)
      : controls(std::move(u)), start(std::move(s)), integrator_steps(substeps) {
    if (controls.rows() < 1) throw InputError("horizontal path needs at least one segment");
    if (controls.cols() != start.algebra().horizontal_dim()) {
      throw InputError("control width " + std::to_string(controls.cols()) + " differs from horizontal dimension " +
                       std::to_string(start.algebra().horizontal_dim()));
    }
    if (!controls.allFinite()) throw InputError("horizontal path has non-finite controls");
    if (integrator_steps < 1) throw InputError("integrator_steps must be positive");
  }

  int segments() const { return static_cast<int>(controls.rows()); }
};

inline double horizontal_length(const HorizontalPath& path) {
  double len = 0.0;
  for (int s = 0; s < path.segments(); ++s) len += path.controls.row(s).norm();
  return len / path.segments();
}

namespace detail {

template <class Visit>
Vector integrate_controls(const GroupModel& m, Vector x, const Matrix& controls, int substeps, Visit&& visit) {
  const int N = static_cast<int>(controls.rows());
  const double dt = 1.0 / (static_cast<double>(N) * substeps);
  visit(0.0, x);
  for (int s = 0; s < N; ++s) {
    const Vector u = controls.row(s).transpose();
    auto f = [&](const Vector& y) -> Vector { return left_invariant_frame(m, y) * u; };
    for (int t = 0; t < substeps; ++t) {
      const Vector k1 = f(x);
      const Vector k2 = f(x + 0.5 * dt * k1);
      const Vector k3 = f(x + 0.5 * dt * k2);
      const Vector k4 = f(x + dt * k3);
      x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) throw NumericError("path integration produced a non-finite state");
      visit((static_cast<double>(s) * substeps + t + 1) * dt, x);
    }
  }
  return x;
}

}  // namespace detail

/// Endpoint of the path by fixed-step RK4 on gamma' = sum_i u_i X^i(gamma).
inline GroupElement integrate_path(const HorizontalPath& path) {
  const GroupModel& m = *path.start.model();
  Vector end = detail::integrate_controls(m, path.start.coords(), path.controls, path.integrator_steps,
                                          [](double, const Vector&) {});
  return {path.start.model(), std::move(end)};
}

/// Every RK4 state as (t, coords).
inline std::vector<std::pair<double, Vector>> sample_path(const HorizontalPath& path) {
  std::vector<std::pair<double, Vector>> out;
  detail::integrate_controls(*path.start.model(), path.start.coords(), path.controls, path.integrator_steps,
                             [&](double t, const Vector& x) { out.emplace_back(t, x); });
  return out;
}

/// CSV with header t,x1..xn, one row per integrator state.
inline void write_path_csv(std::ostream& os, const HorizontalPath& path) {
  const int n = path.start.dim();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  os << "\n";
  os.precision(17);
  for (const auto& [t, x] : sample_path(path)) {
    os << t;
    for (int i = 0; i < n; ++i) os << "," << x[i];
    os << "\n";
  }
}

// ---------------------------------------------------------------------------
// CC distance upper bounds

struct CcOptions {
  int segments = 8;
  int substeps = 16;
  int restarts = 12;
  int budget = 200;  // coordinate-descent sweeps per restart
  std::uint64_t seed = 0;
  double threshold = 1e-4;  // endpoint box residual accepted as converged
  double lambda0 = 10.0;
  int threads = 1;
};

struct CcEstimate {
  double length = 0.0;
  double endpoint_residual = 0.0;
  HorizontalPath path;
  bool converged = false;
  double lambda = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

/// First-kind product; the closed order-3 series is exact up to step 3 and
/// avoids the general plan in the optimizer's inner loop.
inline Vector fast_product(const StratifiedAlgebra& g, const Vector& x, const Vector& y) {
  if (g.step() == 1) return x + y;
  if (g.step() == 2) return x + y + 0.5 * bracket(g, x, y);
  if (g.step() == 3) return bch_order3(g, x, y);
  return bch_product(g, x, y);
}

/// Exact endpoint of a piecewise-constant control started at the identity, in
/// first-kind coordinates: the flow of a left-invariant field for time dt is
/// right multiplication by exp(dt u).
inline Vector control_endpoint(const StratifiedAlgebra& g, const Matrix& u) {
  const int N = static_cast<int>(u.rows());
  const int m1 = g.horizontal_dim();
  Vector x = Vector::Zero(g.dim());
  Vector seg = Vector::Zero(g.dim());
  for (int s = 0; s < N; ++s) {
    seg.head(m1) = u.row(s).transpose() / N;
    x = s == 0 ? seg : fast_product(g, x, seg);
  }
  return x;
}

inline double control_length(const Matrix& u) {
  double len = 0.0;
  for (int s = 0; s < u.rows(); ++s) len += u.row(s).norm();
  return len / static_cast<double>(u.rows());
}

/// Minimum-norm Gauss-Newton correction of the controls onto endpoint == target.
inline Matrix restore_feasibility(const StratifiedAlgebra& g, Matrix u, const Vector& target, double scale) {
  const int N = static_cast<int>(u.rows());
  const int m1 = static_cast<int>(u.cols());
  const int vars = N * m1;
  Vector err = control_endpoint(g, u) - target;
  double err_norm = err.norm();
  for (int iter = 0; iter < 30 && err_norm > 1e-15 * (1.0 + scale); ++iter) {
    Matrix jac(g.dim(), vars);
    const double h = 1e-6 * (1.0 + scale);
    for (int v = 0; v < vars; ++v) {
      Matrix up = u, dn = u;
      up(v / m1, v % m1) += h;
      dn(v / m1, v % m1) -= h;
      jac.col(v) = (control_endpoint(g, up) - control_endpoint(g, dn)) / (2.0 * h);
    }
    const Vector delta = jac.completeOrthogonalDecomposition().solve(-err);
    double t = 1.0;
    bool improved = false;
    for (int back = 0; back < 12; ++back, t *= 0.5) {
      Matrix trial = u;
      for (int v = 0; v < vars; ++v) trial(v / m1, v % m1) += t * delta[v];
      const Vector e = control_endpoint(g, trial) - target;
      if (e.norm() < err_norm) {
        u = trial;
        err = e;
        err_norm = e.norm();
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return u;
}

/// Local descent of the energy |u|^2 on {endpoint(u) == target}. Each step
/// moves towards the minimum-norm control with the linearised endpoint, then
/// restores feasibility; steps are kept only if the length drops.
inline Matrix refine_energy(const StratifiedAlgebra& g, Matrix u, const Vector& target, double scale,
                            double feasible_tol, int iterations = 100) {
  const int N = static_cast<int>(u.rows());
  const int m1 = static_cast<int>(u.cols());
  const int vars = N * m1;
  auto residual = [&](const Matrix& c) { return box_norm(g, fast_product(g, -control_endpoint(g, c), target)); };
  double len = control_length(u);
  for (int iter = 0; iter < iterations; ++iter) {
    Matrix jac(g.dim(), vars);
    const double h = 1e-6 * (1.0 + scale);
    for (int v = 0; v < vars; ++v) {
      Matrix up = u, dn = u;
      up(v / m1, v % m1) += h;
      dn(v / m1, v % m1) -= h;
      jac.col(v) = (control_endpoint(g, up) - control_endpoint(g, dn)) / (2.0 * h);
    }
    Vector flat(vars);
    for (int v = 0; v < vars; ++v) flat[v] = u(v / m1, v % m1);
    const Vector err = control_endpoint(g, u) - target;
    const Vector goal = jac.completeOrthogonalDecomposition().solve(jac * flat - err);
    const Vector dir = goal - flat;
    bool improved = false;
    for (double t = 1.0; t > 1e-3; t *= 0.5) {
      Matrix trial = u;
      for (int v = 0; v < vars; ++v) trial(v / m1, v % m1) += t * dir[v];
      trial = restore_feasibility(g, trial, target, scale);
      const double tl = control_length(trial);
      if (tl < len - 1e-12 * (1.0 + len) && residual(trial) <= feasible_tol) {
        u = std::move(trial);
        len = tl;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return u;
}

struct RestartResult {
  bool feasible = false;
  double length = std::numeric_limits<double>::infinity();
  Matrix controls;
  double lambda = 0.0;
};

inline RestartResult cc_restart(const StratifiedAlgebra& g, const Vector& target, const CcOptions& opt, int index) {
  const int N = opt.segments;
  const int m1 = g.horizontal_dim();
  const double scale = std::max(box_norm(g, target), 1e-6);
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix u(N, m1);
  for (int s = 0; s < N; ++s)
    for (int i = 0; i < m1; ++i) u(s, i) = target[i] + (index == 0 ? 0.0 : scale * normal(rng));

  auto residual = [&](const Matrix& c) {
    const Vector end = control_endpoint(g, c);
    return box_norm(g, fast_product(g, -end, target));
  };
  double lambda = opt.lambda0;
  auto objective = [&](const Matrix& c) {
    const double r = residual(c);
    return control_length(c) + lambda * r * r;
  };

  RestartResult best;
  best.lambda = lambda;
  const double s0 = 0.25 * scale;
  const double s_min = 1e-7 * scale;
  double step = s0;
  double f = objective(u);
  for (int sweep = 0; sweep < opt.budget; ++sweep) {
    bool moved = false;
    for (int v = 0; v < N * m1; ++v) {
      for (double dir : {1.0, -1.0}) {
        Matrix trial = u;
        trial(v / m1, v % m1) += dir * step;
        const double ft = objective(trial);
        if (ft < f) {
          u = std::move(trial);
          f = ft;
          moved = true;
          break;
        }
      }
    }

    // Stalled sweeps leave u unchanged, nothing new to polish.
    const bool polish = moved || sweep == 0;
    const Matrix polished = polish ? restore_feasibility(g, u, target, scale) : u;
    if (polish && residual(polished) <= 0.01 * opt.threshold) {
      const double len = control_length(polished);
      if (len < best.length) {
        best.feasible = true;
        best.length = len;
        best.controls = polished;
        best.lambda = lambda;
      }
    }

    if (!moved) {
      step *= 0.5;
      if (step < s_min) {
        if (residual(u) <= opt.threshold) break;
        lambda *= 2.0;
        step = s0;
        f = objective(u);
      }
    }
  }
  if (best.feasible) {
    best.controls = refine_energy(g, best.controls, target, scale, 0.01 * opt.threshold);
    best.length = control_length(best.controls);
  } else {
    best.controls = u;
    best.length = control_length(u);
    best.lambda = lambda;
  }
  return best;
}

}  // namespace detail

/// Upper bound for d_cc(a, b) from the shortest feasible piecewise-constant
/// horizontal path found by penalized multi-start coordinate descent.
///
/// The returned length is an upper bound only when `converged` is set, i.e.
/// the RK4 endpoint of the path is within opt.threshold of b.
inline CcEstimate cc_upper_bound(const GroupElement& a, const GroupElement& b, const CcOptions& opt = {}) {
  check_same_model(a, b);
  if (opt.segments < 1) throw InputError("cc_upper_bound needs at least one segment");
  if (opt.restarts < 1 || opt.budget < 0) throw InputError("cc_upper_bound needs restarts >= 1 and budget >= 0");
  const GroupModel& m = *a.model();
  const StratifiedAlgebra& g = m.algebra();
  const int m1 = g.horizontal_dim();
  const Vector rel = m.multiply(m.inverse(a.coords()), b.coords());
  const Vector target = m.to_first(rel);

  Matrix controls = Matrix::Zero(opt.segments, m1);
  double lambda = opt.lambda0;
  if (box_norm(g, target) > 0.0) {
    std::vector<detail::RestartResult> results(static_cast<std::size_t>(opt.restarts));
    const int workers = std::clamp(opt.threads, 1, opt.restarts);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < opt.restarts; r += workers)
          results[static_cast<std::size_t>(r)] = detail::cc_restart(g, target, opt, r);
      });
    }
    for (auto& t : pool) t.join();
    // Feasible results first, then shortest, ties to the lower restart index.
    const detail::RestartResult* best = &results.front();
    for (const auto& r : results) {
      const bool better = (r.feasible && !best->feasible) || (r.feasible == best->feasible && r.length < best->length);
      if (better) best = &r;
    }
    controls = best->controls;
    lambda = best->lambda;
  }

  HorizontalPath path(controls, a, opt.substeps);
  const GroupElement end = integrate_path(path);
  const double res = box_quasi_distance(end, b);
  return CcEstimate{horizontal_length(path), res, std::move(path), res <= opt.threshold, lambda, opt.seed};
}

}  // namespace carnot
