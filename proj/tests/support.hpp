#pragma once

// Shared test helpers: seeded sampling and independent group-law oracles built
// from faithful matrix representations (products via matrix exp/log).

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "carnot/carnot.hpp"

namespace carnot::test {

inline Vector random_vector(std::mt19937_64& rng, int n, double lo = -2.0, double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline double rel_err(const Vector& a, const Vector& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

/// exp of a nilpotent matrix; the series terminates.
inline Matrix expm_nilpotent(const Matrix& a) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  Matrix term = out;
  for (int k = 1; k <= a.rows(); ++k) {
    term = term * a / static_cast<double>(k);
    if (term.cwiseAbs().maxCoeff() == 0.0) break;
    out += term;
  }
  return out;
}

/// log of a unipotent matrix; the series terminates.
inline Matrix logm_unipotent(const Matrix& g) {
  const Matrix n = g - Matrix::Identity(g.rows(), g.cols());
  Matrix out = Matrix::Zero(g.rows(), g.cols());
  Matrix power = n;
  for (int k = 1; k <= g.rows(); ++k) {
    out += ((k % 2) ? 1.0 : -1.0) / static_cast<double>(k) * power;
    power = power * n;
    if (power.cwiseAbs().maxCoeff() == 0.0) break;
  }
  return out;
}

/// A linear map from the algebra into nilpotent matrices, one matrix per basis vector.
struct MatrixRep {
  std::vector<Matrix> gens;

  Matrix to_matrix(const Vector& x) const {
    Matrix m = Matrix::Zero(gens[0].rows(), gens[0].cols());
    for (std::size_t i = 0; i < gens.size(); ++i) m += x[static_cast<Eigen::Index>(i)] * gens[i];
    return m;
  }
  Vector from_matrix(const Matrix& m) const {
    const Eigen::Index d = gens[0].size();
    Matrix a(d, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i)
      a.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(gens[i].data(), d);
    return a.colPivHouseholderQr().solve(Eigen::Map<const Vector>(m.data(), d));
  }
  /// First-kind product by log(exp(X) exp(Y)).
  Vector product(const Vector& x, const Vector& y) const {
    return from_matrix(logm_unipotent(expm_nilpotent(to_matrix(x)) * expm_nilpotent(to_matrix(y))));
  }
  /// max over basis pairs of |[rho e_i, rho e_j] - rho [e_i, e_j]|.
  double homomorphism_defect(const StratifiedAlgebra& g) const {
    double worst = 0.0;
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j) {
        const Matrix lhs = gens[i] * gens[j] - gens[j] * gens[i];
        Vector e = Vector::Zero(g.dim());
        for (int k = 0; k < g.dim(); ++k) e[k] = g.c(i, j, k);
        worst = std::max(worst, (lhs - to_matrix(e)).cwiseAbs().maxCoeff());
      }
    return worst;
  }
  /// Smallest singular value of the stacked generators; > 0 iff faithful.
  double faithfulness() const {
    const Eigen::Index d = gens[0].size();
    Matrix a(d, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t i = 0; i < gens.size(); ++i)
      a.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Vector>(gens[i].data(), d);
    return Eigen::JacobiSVD<Matrix>(a).singularValues().minCoeff();
  }
};

/// Heisenberg algebra with [X_{2i-1}, X_{2i}] = T as strictly upper-triangular matrices.
/// exp(a_1 X^1) ... exp(a_n X^n) in the representation.
inline Matrix second_kind_matrix(const MatrixRep& rep, const Vector& a) {
  Matrix m = Matrix::Identity(rep.gens[0].rows(), rep.gens[0].cols());
  for (Eigen::Index i = 0; i < a.size(); ++i) m = m * expm_nilpotent(a[i] * rep.gens[static_cast<std::size_t>(i)]);
  return m;
}

inline MatrixRep heisenberg_rep(int n) {
  const int size = n + 2;
  MatrixRep r;
  for (int i = 1; i <= n; ++i) {
    Matrix x = Matrix::Zero(size, size), y = Matrix::Zero(size, size);
    x(0, i) = 1.0;
    y(i, n + 1) = 1.0;
    r.gens.push_back(x);
    r.gens.push_back(y);
  }
  Matrix t = Matrix::Zero(size, size);
  t(0, n + 1) = 1.0;
  r.gens.push_back(t);
  return r;
}

/// Algebras R e_0 + (abelian ideal on e_1..e_{n-1}) as affine matrices:
/// e_0 -> ad(e_0) on the ideal, e_j -> translation by e_j.
inline MatrixRep semidirect_rep(const StratifiedAlgebra& g) {
  const int n = g.dim();
  MatrixRep r;
  Matrix x = Matrix::Zero(n, n);
  for (int j = 1; j < n; ++j)
    for (int k = 1; k < n; ++k) x(k - 1, j - 1) = g.c(0, j, k);
  r.gens.push_back(x);
  for (int j = 1; j < n; ++j) {
    Matrix y = Matrix::Zero(n, n);
    y(j - 1, n - 1) = 1.0;
    r.gens.push_back(y);
  }
  return r;
}

/// Left multiplication on the truncated tensor algebra over the first layer.
/// Higher basis vectors are solved from their defining brackets, so the
/// result is a homomorphism exactly when the algebra is free nilpotent.
inline MatrixRep tensor_rep(const StratifiedAlgebra& g) {
  const int m1 = g.horizontal_dim();
  const int s = g.step();
  std::vector<std::vector<int>> words{{}};
  std::map<std::vector<int>, int> index{{{}, 0}};
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (static_cast<int>(words[w].size()) == s) continue;
    for (int a = 0; a < m1; ++a) {
      auto next = words[w];
      next.insert(next.begin(), a);
      index[next] = static_cast<int>(words.size());
      words.push_back(next);
    }
  }
  const int d = static_cast<int>(words.size());
  MatrixRep r;
  r.gens.assign(static_cast<std::size_t>(g.dim()), Matrix::Zero(d, d));
  for (int a = 0; a < m1; ++a)
    for (int w = 0; w < d; ++w) {
      if (static_cast<int>(words[w].size()) == s) continue;
      auto next = words[w];
      next.insert(next.begin(), a);
      r.gens[a](index[next], w) = 1.0;
    }
  for (int l = 2; l <= s; ++l) {
    const int off = g.layer_offset(l);
    const int ml = g.layer_dim(l);
    std::vector<Matrix> rhs;
    std::vector<Vector> rows;
    for (int a = 0; a < m1; ++a)
      for (int b = g.layer_offset(l - 1); b < g.layer_offset(l - 1) + g.layer_dim(l - 1); ++b) {
        Vector row(ml);
        for (int k = 0; k < ml; ++k) row[k] = g.c(a, b, off + k);
        if (row.norm() == 0.0) continue;
        rows.push_back(row);
        rhs.push_back(r.gens[a] * r.gens[b] - r.gens[b] * r.gens[a]);
      }
    Matrix c(static_cast<Eigen::Index>(rows.size()), ml);
    for (std::size_t p = 0; p < rows.size(); ++p) c.row(static_cast<Eigen::Index>(p)) = rows[p].transpose();
    const Matrix pinv = c.completeOrthogonalDecomposition().pseudoInverse();
    for (int k = 0; k < ml; ++k) {
      Matrix m = Matrix::Zero(d, d);
      for (std::size_t p = 0; p < rhs.size(); ++p) m += pinv(k, static_cast<Eigen::Index>(p)) * rhs[p];
      r.gens[static_cast<std::size_t>(off + k)] = m;
    }
  }
  return r;
}

/// Graded change of basis by random invertible layer blocks; the result is a
/// valid stratified algebra with generic (inexact) constants.
inline AlgebraPtr random_graded_change(const StratifiedAlgebra& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = g.dim();
  Matrix p = Matrix::Zero(n, n);
  for (int l = 1; l <= g.step(); ++l) {
    const int o = g.layer_offset(l), m = g.layer_dim(l);
    Matrix b = Matrix::Identity(m, m) + 0.5 * Matrix(Matrix::NullaryExpr(m, m, [&](Eigen::Index, Eigen::Index) {
                 return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
               }));
    p.block(o, o, m, m) = b;
  }
  const Matrix pinv = p.inverse();
  std::vector<double> c(static_cast<std::size_t>(n * n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // [f_i, f_j] with f_i = sum_a p(a, i) e_a, expanded back in the f basis.
      Vector e = Vector::Zero(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (p(a, i) == 0.0 || p(b, j) == 0.0) continue;
          for (int k = 0; k < n; ++k) e[k] += p(a, i) * p(b, j) * g.c(a, b, k);
        }
      const Vector f = pinv * e;
      for (int k = 0; k < n; ++k) c[static_cast<std::size_t>((i * n + j) * n + k)] = f[k];
    }
  return StratifiedAlgebra::from_tensor(g.layer_dims(), c, "random(" + g.name() + ")");
}

}  // namespace carnot::test
