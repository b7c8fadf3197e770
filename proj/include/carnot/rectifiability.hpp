#pragma once

// Search for k-dimensional Lie subalgebras inside the horizontal layer.
//
// Brackets of horizontal vectors lie in the second layer, which meets the
// first only in 0, so a horizontal k-plane is a subalgebra exactly when it is
// abelian. The search minimises sum_{i<j} |[v_i, v_j]|^2 over orthonormal
// k-frames of the first layer.

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "carnot/lie_core.hpp"

namespace carnot {

struct WitnessCertificate {
  int k = 0;
  Matrix basis;  // m1 x k, orthonormal columns in layer-1 coordinates
  double residual = 0.0;
};

/// Outcome of the exact two-plane decision (k = 2, m1 <= 4).
struct ExactDecision {
  bool exists = false;
  std::optional<WitnessCertificate> witness;
  std::string method;
};

struct SubalgebraSearch {
  bool found = false;
  std::optional<WitnessCertificate> certificate;
  double best_residual = 0.0;  // max pairwise bracket norm of the best frame
  int restarts = 0;
  std::uint64_t seed = 0;
  /// Only set by the exact fallback; otherwise NotFound is evidence, not proof.
  std::optional<ExactDecision> exact;
  bool probabilistic() const { return !found && !exact; }
};

namespace detail {

/// Layer-2 components of [e_a, e_b] for layer-1 indices, as skew m1 x m1 matrices.
inline std::vector<Matrix> horizontal_bracket_forms(const StratifiedAlgebra& g) {
  const int m1 = g.horizontal_dim();
  const int m2 = g.step() >= 2 ? g.layer_dim(2) : 0;
  const int off = m1;
  std::vector<Matrix> out(static_cast<std::size_t>(m2), Matrix::Zero(m1, m1));
  for (int c = 0; c < m2; ++c)
    for (int a = 0; a < m1; ++a)
      for (int b = 0; b < m1; ++b) out[static_cast<std::size_t>(c)](a, b) = g.c(a, b, off + c);
  return out;
}

inline double max_pair_bracket(const std::vector<Matrix>& forms, const Matrix& V) {
  double worst = 0.0;
  for (int i = 0; i < V.cols(); ++i)
    for (int j = i + 1; j < V.cols(); ++j) {
      double s = 0.0;
      for (const auto& M : forms) {
        const double v = V.col(i).dot(M * V.col(j));
        s += v * v;
      }
      worst = std::max(worst, std::sqrt(s));
    }
  return worst;
}

inline double frame_objective(const std::vector<Matrix>& forms, const Matrix& V, Matrix* grad) {
  double f = 0.0;
  if (grad) grad->setZero(V.rows(), V.cols());
  for (int i = 0; i < V.cols(); ++i)
    for (int j = i + 1; j < V.cols(); ++j)
      for (const auto& M : forms) {
        const Vector Mj = M * V.col(j);
        const double b = V.col(i).dot(Mj);
        f += b * b;
        if (grad) {
          grad->col(i) += 2.0 * b * Mj;
          grad->col(j) += 2.0 * b * (M.transpose() * V.col(i));
        }
      }
  return f;
}

inline Matrix orthonormalize(const Matrix& V) {
  Eigen::HouseholderQR<Matrix> qr(V);
  Matrix Q = qr.householderQ() * Matrix::Identity(V.rows(), V.cols());
  // Fix signs so the retraction is continuous.
  const Matrix R = qr.matrixQR().topRows(V.cols()).triangularView<Eigen::Upper>();
  for (int i = 0; i < V.cols(); ++i)
    if (R(i, i) < 0) Q.col(i) *= -1.0;
  return Q;
}

}  // namespace detail

/// Orthonormalises the basis and returns the max pairwise bracket norm.
/// Accepts m1 x k (layer-1 coordinates) or n x k with zero non-horizontal rows.
inline double verify_witness(const StratifiedAlgebra& g, const Matrix& basis) {
  const int m1 = g.horizontal_dim();
  Matrix V;
  if (basis.rows() == m1) {
    V = basis;
  } else if (basis.rows() == g.dim()) {
    if (basis.bottomRows(g.dim() - m1).cwiseAbs().maxCoeff() > 0.0) {
      throw InputError("witness vectors must lie in the first layer");
    }
    V = basis.topRows(m1);
  } else {
    throw InputError("witness basis has " + std::to_string(basis.rows()) + " rows, expected " + std::to_string(m1) +
                     " or " + std::to_string(g.dim()));
  }
  if (V.cols() < 1) throw InputError("witness basis is empty");
  if (detail::numeric_rank(V, 1e-10) < V.cols()) throw InputError("witness basis is rank deficient");
  return detail::max_pair_bracket(detail::horizontal_bracket_forms(g), detail::orthonormalize(V));
}

/// Exact decision for k = 2 and m1 <= 4 through Pluecker coordinates.
///
/// A 2-plane span{v,w} is abelian iff p = v ^ w lies in the kernel N of
/// p -> sum_{a<b} p_ab [e_a, e_b]. For m1 <= 3 every p is decomposable; for
/// m1 = 4 p must also satisfy p12 p34 - p13 p24 + p14 p23 = 0, which has a
/// nonzero solution in N iff that quadratic form is not definite on N.
inline ExactDecision exact_two_plane_decision(const StratifiedAlgebra& g, double tol = 1e-10) {
  const int m1 = g.horizontal_dim();
  if (m1 < 2 || m1 > 4) throw UnsupportedError("exact two-plane decision needs 2 <= m1 <= 4");
  const auto forms = detail::horizontal_bracket_forms(g);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m1; ++a)
    for (int b = a + 1; b < m1; ++b) pairs.emplace_back(a, b);
  const int P = static_cast<int>(pairs.size());
  Matrix L = Matrix::Zero(std::max<int>(1, static_cast<int>(forms.size())), P);
  for (std::size_t c = 0; c < forms.size(); ++c)
    for (int q = 0; q < P; ++q) L(static_cast<Eigen::Index>(c), q) = forms[c](pairs[q].first, pairs[q].second);

  Eigen::JacobiSVD<Matrix> svd(L, Eigen::ComputeFullV);
  const double smax = svd.singularValues().size() ? svd.singularValues().maxCoeff() : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > tol * std::max(1.0, smax)) ++rank;
  const Matrix N = svd.matrixV().rightCols(P - rank);  // kernel basis, P x d

  ExactDecision out;
  out.method = "pluecker";
  if (N.cols() == 0) {
    out.exists = false;
    return out;
  }

  Vector p;
  if (m1 <= 3) {
    p = N.col(0);
  } else {
    // Pfaffian as a symmetric form on Lambda^2 R^4 in the order 12,13,14,23,24,34.
    Matrix S = Matrix::Zero(6, 6);
    S(0, 5) = S(5, 0) = 0.5;
    S(1, 4) = S(4, 1) = -0.5;
    S(2, 3) = S(3, 2) = 0.5;
    const Matrix Q = N.transpose() * S * N;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Q);
    const Vector& lam = eig.eigenvalues();
    const Matrix& U = eig.eigenvectors();
    int zero = -1;
    for (int i = 0; i < lam.size(); ++i)
      if (std::abs(lam[i]) <= tol) zero = i;
    if (zero >= 0) {
      p = N * U.col(zero);
    } else if (lam.minCoeff() < 0.0 && lam.maxCoeff() > 0.0) {
      Eigen::Index lo = 0, hi = 0;
      lam.minCoeff(&lo);
      lam.maxCoeff(&hi);
      p = N * (std::sqrt(-lam[lo]) * U.col(hi) + std::sqrt(lam[hi]) * U.col(lo));
    } else {
      out.exists = false;
      return out;
    }
  }

  // A decomposable skew matrix v w^T - w v^T has rank 2; its range is the plane.
  Matrix Pm = Matrix::Zero(m1, m1);
  for (int q = 0; q < P; ++q) {
    Pm(pairs[q].first, pairs[q].second) = p[q];
    Pm(pairs[q].second, pairs[q].first) = -p[q];
  }
  Eigen::JacobiSVD<Matrix> psvd(Pm, Eigen::ComputeFullU);
  WitnessCertificate cert;
  cert.k = 2;
  cert.basis = detail::orthonormalize(psvd.matrixU().leftCols(2));
  cert.residual = detail::max_pair_bracket(forms, cert.basis);
  out.exists = true;
  out.witness = cert;
  return out;
}

struct SearchOptions {
  int restarts = 200;
  std::uint64_t seed = 0;
  int max_iterations = 400;
  double certificate_tol = 1e-8;
  bool exact_fallback = true;
};

/// Multi-start projected gradient descent on the Stiefel manifold of
/// orthonormal k-frames in the first layer.
inline SubalgebraSearch horizontal_subalgebra_search(const StratifiedAlgebra& g, int k, const SearchOptions& opt = {}) {
  const int m1 = g.horizontal_dim();
  if (k < 1 || k > m1) {
    throw InputError("subalgebra dimension k=" + std::to_string(k) + " must lie in 1.." + std::to_string(m1));
  }
  if (opt.restarts < 1) throw InputError("search needs at least one restart");
  const auto forms = detail::horizontal_bracket_forms(g);
  SubalgebraSearch out;
  out.seed = opt.seed;
  out.best_residual = std::numeric_limits<double>::infinity();
  Matrix best;

  for (int r = 0; r < opt.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    Matrix V(m1, k);
    for (int i = 0; i < m1; ++i)
      for (int j = 0; j < k; ++j) V(i, j) = normal(rng);
    V = detail::orthonormalize(V);

    Matrix G;
    double f = detail::frame_objective(forms, V, &G);
    double step = 1.0;
    for (int it = 0; it < opt.max_iterations && f > 1e-30; ++it) {
      const Matrix sym = 0.5 * (V.transpose() * G + G.transpose() * V);
      const Matrix D = G - V * sym;  // Riemannian gradient
      if (D.norm() < 1e-16) break;
      bool accepted = false;
      for (int back = 0; back < 40; ++back) {
        const Matrix trial = detail::orthonormalize(V - step * D);
        Matrix Gt;
        const double ft = detail::frame_objective(forms, trial, &Gt);
        if (ft <= f - 1e-4 * step * D.squaredNorm()) {
          V = trial;
          f = ft;
          G = Gt;
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }

    const double res = detail::max_pair_bracket(forms, V);
    if (res < out.best_residual) {
      out.best_residual = res;
      best = V;
    }
    out.restarts = r + 1;
    if (res <= opt.certificate_tol) break;
  }

  if (out.best_residual <= opt.certificate_tol) {
    out.found = true;
    out.certificate = WitnessCertificate{k, best, detail::max_pair_bracket(forms, best)};
  } else if (opt.exact_fallback && k == 2 && m1 >= 2 && m1 <= 4) {
    out.exact = exact_two_plane_decision(g);
    if (out.exact->exists) {
      out.found = true;
      out.certificate = out.exact->witness;
    }
  }
  return out;
}

}  // namespace carnot
