#pragma once

// Stratified Lie algebras given by structural constants.
//
// A StratifiedAlgebra stores the dense tensor c[i][j][k] with
// [e_i, e_j] = sum_k c[i][j][k] e_k over a basis that lists layer 1 first,
// then layer 2, and so on. Every other module reads its group structure from
// this tensor.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "carnot/errors.hpp"
#include "carnot/rational.hpp"

namespace carnot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A structural constant as read from a config file: the floating value used in
/// computation plus, when the input was rational, its exact form.
struct Coefficient {
  double value = 0.0;
  std::optional<Rational> exact;

  Coefficient() = default;
  Coefficient(Rational r) : value(r.to_double()), exact(r) {}  // NOLINT(implicit)
  Coefficient(std::int64_t v) : Coefficient(Rational(v)) {}    // NOLINT(implicit)
  Coefficient(int v) : Coefficient(Rational(v)) {}             // NOLINT(implicit)
  Coefficient(double v) : value(v) {}                           // NOLINT(implicit)
};

/// One `[e_i, e_j] = value * e_k` entry, 1-based like the config format.
struct StructureTriple {
  int i = 0;
  int j = 0;
  int k = 0;
  Coefficient value;
};

class StratifiedAlgebra;
using AlgebraPtr = std::shared_ptr<const StratifiedAlgebra>;

class StratifiedAlgebra {
 public:
  struct Entry {
    int i, j, k;
    double value;
  };

  /// Raw dense tensor, no antisymmetric completion. `constants` has n^3 entries
  /// indexed (i*n + j)*n + k. Use validate() to check the algebraic hypotheses.
  static AlgebraPtr from_tensor(std::vector<int> layer_dims, std::vector<double> constants,
                                std::string name = "custom",
                                std::optional<std::vector<Rational>> exact = std::nullopt,
                                std::vector<std::string> labels = {}) {
    return AlgebraPtr(new StratifiedAlgebra(std::move(layer_dims), std::move(constants),
                                            std::move(name), std::move(exact), std::move(labels)));
  }

  /// Builds the tensor from triples and applies antisymmetric completion.
  /// Conflicting entries (e.g. [1,2,3]=1 and [2,1,3]=1) raise InputError.
  static AlgebraPtr from_triples(std::vector<int> layer_dims, const std::vector<StructureTriple>& triples,
                                 std::string name = "custom", std::vector<std::string> labels = {}) {
    const int n = checked_dimension(layer_dims);
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> c(nn * nn * nn, 0.0);
    std::vector<Rational> exact(nn * nn * nn);
    std::vector<char> set(nn * nn * nn, 0);
    bool all_exact = true;
    auto put = [&](int i, int j, int k, const Coefficient& v, const StructureTriple& src) {
      const std::size_t at = (static_cast<std::size_t>(i) * nn + j) * nn + k;
      if (set[at] && c[at] != v.value) {
        throw InputError("conflicting structure constant for [" + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + "," + std::to_string(k + 1) + "] from triple [" +
                         std::to_string(src.i) + "," + std::to_string(src.j) + "," +
                         std::to_string(src.k) + "]");
      }
      set[at] = 1;
      c[at] = v.value;
      if (v.exact) exact[at] = *v.exact;
    };
    for (const auto& t : triples) {
      if (t.i < 1 || t.j < 1 || t.k < 1 || t.i > n || t.j > n || t.k > n) {
        throw InputError("structure triple index out of range 1.." + std::to_string(n) + ": [" +
                         std::to_string(t.i) + "," + std::to_string(t.j) + "," + std::to_string(t.k) + "]");
      }
      if (t.i == t.j && t.value.value != 0.0) {
        throw InputError("structure triple [" + std::to_string(t.i) + "," + std::to_string(t.j) + "," +
                         std::to_string(t.k) + "] brackets a basis vector with itself");
      }
      if (!t.value.exact) all_exact = false;
      Coefficient neg = t.value;
      neg.value = -neg.value;
      if (neg.exact) neg.exact = -*neg.exact;
      put(t.i - 1, t.j - 1, t.k - 1, t.value, t);
      if (t.i != t.j) put(t.j - 1, t.i - 1, t.k - 1, neg, t);
    }
    std::optional<std::vector<Rational>> ex;
    if (all_exact) ex = std::move(exact);
    return from_tensor(std::move(layer_dims), std::move(c), std::move(name), std::move(ex), std::move(labels));
  }

  int dim() const { return n_; }
  int step() const { return static_cast<int>(layer_dims_.size()); }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  int layer_dim(int layer) const { return layer_dims_.at(static_cast<std::size_t>(layer - 1)); }
  /// 0-based offset of the first basis vector of `layer` (1-based).
  int layer_offset(int layer) const { return offsets_.at(static_cast<std::size_t>(layer - 1)); }
  /// 1-based layer of basis index `idx` (0-based).
  int layer_of(int idx) const { return layer_of_.at(static_cast<std::size_t>(idx)); }
  int horizontal_dim() const { return layer_dims_.front(); }

  double c(int i, int j, int k) const {
    return constants_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::vector<double>& constants() const { return constants_; }
  const std::vector<Entry>& nonzeros() const { return nonzeros_; }
  double max_abs_constant() const { return max_abs_; }

  bool is_exact() const { return exact_.has_value(); }
  const std::optional<std::vector<Rational>>& exact_constants() const { return exact_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// validate(*this).passed() at the default tolerance, computed once.
  bool is_valid() const;

  /// Triples with i<j and nonzero value, 1-based, in lexicographic order.
  std::vector<StructureTriple> upper_triples() const {
    std::vector<StructureTriple> out;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          const std::size_t at = (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
          if (constants_[at] == 0.0) continue;
          StructureTriple t{i + 1, j + 1, k + 1, Coefficient(constants_[at])};
          if (exact_) t.value = Coefficient((*exact_)[at]);
          out.push_back(t);
        }
    return out;
  }

 private:
  StratifiedAlgebra(std::vector<int> layer_dims, std::vector<double> constants, std::string name,
                    std::optional<std::vector<Rational>> exact, std::vector<std::string> labels)
      : layer_dims_(std::move(layer_dims)),
        constants_(std::move(constants)),
        exact_(std::move(exact)),
        name_(std::move(name)),
        labels_(std::move(labels)) {
    n_ = checked_dimension(layer_dims_);
    const auto cube = static_cast<std::size_t>(n_) * n_ * n_;
    if (constants_.size() != cube) {
      throw InputError("structure tensor has " + std::to_string(constants_.size()) + " entries, expected " +
                       std::to_string(cube));
    }
    if (exact_ && exact_->size() != cube) throw InputError("exact structure tensor has wrong size");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n_) {
      throw InputError("basis labels must name all " + std::to_string(n_) + " basis vectors");
    }
    int off = 0;
    for (std::size_t l = 0; l < layer_dims_.size(); ++l) {
      offsets_.push_back(off);
      for (int t = 0; t < layer_dims_[l]; ++t) layer_of_.push_back(static_cast<int>(l) + 1);
      off += layer_dims_[l];
    }
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          const double v = c(i, j, k);
          if (!std::isfinite(v)) throw InputError("non-finite structure constant");
          if (v != 0.0) {
            nonzeros_.push_back({i, j, k, v});
            max_abs_ = std::max(max_abs_, std::abs(v));
          }
        }
  }

  static int checked_dimension(const std::vector<int>& dims) {
    if (dims.empty()) throw InputError("layer_dims must list at least one layer");
    int n = 0;
    for (int d : dims) {
      if (d <= 0) throw InputError("layer dimensions must be positive");
      n += d;
    }
    return n;
  }

  std::vector<int> layer_dims_;
  std::vector<int> offsets_;
  std::vector<int> layer_of_;
  int n_ = 0;
  std::vector<double> constants_;
  std::vector<Entry> nonzeros_;
  double max_abs_ = 0.0;
  std::optional<std::vector<Rational>> exact_;
  std::string name_;
  std::vector<std::string> labels_;
  mutable std::once_flag valid_once_;
  mutable bool valid_ = false;
};

/// Raw bracket on coordinate vectors of one algebra. Hot path for BCH and frames.
inline Vector bracket(const StratifiedAlgebra& g, const Vector& x, const Vector& y) {
  Vector out = Vector::Zero(g.dim());
  for (const auto& e : g.nonzeros()) out[e.k] += e.value * x[e.i] * y[e.j];
  return out;
}

/// An element of the Lie algebra together with the algebra it lives in.
struct AlgebraVector {
  Vector coords;
  AlgebraPtr algebra;

  AlgebraVector(AlgebraPtr alg, Vector c) : coords(std::move(c)), algebra(std::move(alg)) {
    if (!algebra) throw InputError("algebra vector without algebra");
    if (coords.size() != algebra->dim()) {
      throw InputError("vector of length " + std::to_string(coords.size()) + " in algebra of dimension " +
                       std::to_string(algebra->dim()));
    }
  }
  static AlgebraVector zero(AlgebraPtr alg) {
    const int n = alg->dim();
    return {std::move(alg), Vector::Zero(n)};
  }
  /// Basis vector e_idx (0-based).
  static AlgebraVector basis(AlgebraPtr alg, int idx) {
    Vector v = Vector::Zero(alg->dim());
    v[idx] = 1.0;
    return {std::move(alg), std::move(v)};
  }

  friend AlgebraVector operator+(const AlgebraVector& a, const AlgebraVector& b) {
    check_same(a, b);
    return {a.algebra, a.coords + b.coords};
  }
  friend AlgebraVector operator-(const AlgebraVector& a, const AlgebraVector& b) {
    check_same(a, b);
    return {a.algebra, a.coords - b.coords};
  }
  friend AlgebraVector operator-(const AlgebraVector& a) { return {a.algebra, -a.coords}; }
  friend AlgebraVector operator*(double s, const AlgebraVector& a) { return {a.algebra, s * a.coords}; }

  static void check_same(const AlgebraVector& a, const AlgebraVector& b) {
    if (a.algebra != b.algebra) throw InputError("vectors belong to different algebras");
  }
};

inline AlgebraVector bracket(const AlgebraVector& x, const AlgebraVector& y) {
  AlgebraVector::check_same(x, y);
  return {x.algebra, bracket(*x.algebra, x.coords, y.coords)};
}

// ---------------------------------------------------------------------------
// Validation

struct CheckResult {
  std::string name;
  bool passed = true;
  double worst_residual = 0.0;
  /// 1-based index triples responsible for a failure (capped).
  std::vector<std::array<int, 3>> offenders;
  std::string detail;
};

struct ValidationReport {
  double tolerance = 0.0;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  double worst_residual() const {
    double w = 0.0;
    for (const auto& c : checks) w = std::max(w, c.worst_residual);
    return w;
  }
  const CheckResult& check(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return c;
    throw InputError("no validation check named " + name);
  }
};

namespace detail {
inline constexpr std::size_t kMaxOffenders = 16;

inline void record(CheckResult& r, double residual, double tol, std::array<int, 3> where) {
  r.worst_residual = std::max(r.worst_residual, residual);
  if (residual > tol) {
    r.passed = false;
    if (r.offenders.size() < kMaxOffenders) r.offenders.push_back(where);
  }
}

/// Numerical rank with a relative singular-value threshold.
inline int numeric_rank(const Matrix& m, double rel_tol = 1e-9) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++rank;
  return rank;
}
}  // namespace detail

/// Checks antisymmetry, Jacobi, grading and bracket generation.
///
/// `base_tol` is scaled by the largest absolute structural constant. Failures
/// are report entries, never exceptions.
inline ValidationReport validate(const StratifiedAlgebra& g, double base_tol = 1e-9) {
  const int n = g.dim();
  const int r = g.step();
  ValidationReport rep;
  rep.tolerance = base_tol * (g.max_abs_constant() > 0.0 ? g.max_abs_constant() : 1.0);
  const double tol = rep.tolerance;

  CheckResult anti{"antisymmetry", true, 0.0, {}, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = 0; k < n; ++k)
        detail::record(anti, std::abs(g.c(i, j, k) + g.c(j, i, k)), tol, {i + 1, j + 1, k + 1});

  CheckResult jac{"jacobi", true, 0.0, {}, {}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            s += g.c(j, l, m) * g.c(i, m, k) + g.c(l, i, m) * g.c(j, m, k) + g.c(i, j, m) * g.c(l, m, k);
          }
          detail::record(jac, std::abs(s), tol, {i + 1, j + 1, l + 1});
        }

  CheckResult grad{"grading", true, 0.0, {}, {}};
  for (const auto& e : g.nonzeros()) {
    const int target = g.layer_of(e.i) + g.layer_of(e.j);
    const double residual = (g.layer_of(e.k) == target) ? 0.0 : std::abs(e.value);
    detail::record(grad, residual, tol, {e.i + 1, e.j + 1, e.k + 1});
  }

  CheckResult gen{"bracket_generation", true, 0.0, {}, {}};
  for (int j = 1; j < r; ++j) {
    const int rows = g.layer_dim(j + 1);
    const int o1 = g.layer_offset(1);
    const int oj = g.layer_offset(j);
    const int on = g.layer_offset(j + 1);
    Matrix span(rows, g.layer_dim(1) * g.layer_dim(j));
    int col = 0;
    for (int a = 0; a < g.layer_dim(1); ++a)
      for (int b = 0; b < g.layer_dim(j); ++b, ++col)
        for (int k = 0; k < rows; ++k) span(k, col) = g.c(o1 + a, oj + b, on + k);
    const int rank = detail::numeric_rank(span);
    const double missing = static_cast<double>(rows - rank);
    detail::record(gen, missing, tol, {1, j, j + 1});
    if (missing > 0.0) {
      gen.detail += "[g_1, g_" + std::to_string(j) + "] spans " + std::to_string(rank) + " of " +
                    std::to_string(rows) + " dimensions of g_" + std::to_string(j + 1) + "; ";
    }
  }

  rep.checks = {std::move(anti), std::move(jac), std::move(grad), std::move(gen)};
  return rep;
}

inline bool StratifiedAlgebra::is_valid() const {
  std::call_once(valid_once_, [this] { valid_ = validate(*this).passed(); });
  return valid_;
}

/// True iff the skew matrices are linearly independent, i.e. a step-2 Carnot
/// group with [d_i, d_j] = sum_k alpha[k](i,j) e_k exists.
inline bool step2_realizable(const std::vector<Matrix>& alpha) {
  if (alpha.empty()) return true;
  const Eigen::Index r = alpha.front().rows();
  double scale = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const auto& a = alpha[k];
    if (a.rows() != r || a.cols() != r) {
      throw InputError("structure matrix " + std::to_string(k + 1) + " is not " + std::to_string(r) + "x" +
                       std::to_string(r));
    }
    scale = std::max(scale, a.cwiseAbs().maxCoeff());
  }
  const double skew_tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
  Matrix flat(static_cast<Eigen::Index>(alpha.size()), r * r);
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    if ((alpha[k] + alpha[k].transpose()).cwiseAbs().maxCoeff() > skew_tol) {
      throw InputError("structure matrix " + std::to_string(k + 1) + " is not skew-symmetric");
    }
    flat.row(static_cast<Eigen::Index>(k)) = alpha[k].reshaped().transpose();
  }
  return detail::numeric_rank(flat) == static_cast<int>(alpha.size());
}

/// Q = sum_j j * m_j, the Hausdorff dimension of the group under its CC metric.
inline int homogeneous_dimension(const StratifiedAlgebra& g) {
  int q = 0;
  for (int j = 1; j <= g.step(); ++j) q += j * g.layer_dim(j);
  return q;
}

/// Upper bound (n-1)/(Q-1) on the exponent of a locally Hoelder homeomorphism
/// from R^n onto the group.
inline Rational gromov_bound(const StratifiedAlgebra& g) {
  const int q = homogeneous_dimension(g);
  if (q == 1) throw NumericError("gromov bound undefined: Q - 1 = 0");
  return Rational(g.dim() - 1, q - 1);
}

// ---------------------------------------------------------------------------
// Built-in algebras. All constants are small integers, so validate() residuals
// are exactly zero.

namespace detail {
struct ExactTensor {
  int n;
  std::vector<double> c;
  std::vector<Rational> ex;
  explicit ExactTensor(int dim)
      : n(dim),
        c(static_cast<std::size_t>(dim) * dim * dim, 0.0),
        ex(static_cast<std::size_t>(dim) * dim * dim) {}
  /// [e_i, e_j] += v e_k, with the antisymmetric partner.
  void add(int i, int j, int k, Rational v) {
    auto at = [&](int a, int b) { return (static_cast<std::size_t>(a) * n + b) * n + k; };
    ex[at(i, j)] += v;
    ex[at(j, i)] -= v;
    c[at(i, j)] = ex[at(i, j)].to_double();
    c[at(j, i)] = ex[at(j, i)].to_double();
  }
};

inline AlgebraPtr finish_builtin(std::vector<int> dims, ExactTensor t, std::string name,
                                 std::vector<std::string> labels) {
  auto alg = StratifiedAlgebra::from_tensor(std::move(dims), std::move(t.c), std::move(name), std::move(t.ex),
                                            std::move(labels));
  if (!validate(*alg).passed()) throw InternalError("builtin algebra " + alg->name() + " failed validation");
  return alg;
}
}  // namespace detail

/// Abelian R^n, step 1.
inline AlgebraPtr abelian(int n) {
  if (n < 1) throw UnsupportedError("abelian(n) needs n >= 1");
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("X" + std::to_string(i));
  return detail::finish_builtin({n}, detail::ExactTensor(n), "abelian(" + std::to_string(n) + ")",
                                std::move(labels));
}

/// Heisenberg algebra h^n with basis X1..X2n, T and [X_{2i-1}, X_{2i}] = T.
inline AlgebraPtr heisenberg(int n) {
  if (n < 1) throw UnsupportedError("heisenberg(n) needs n >= 1");
  const int dim = 2 * n + 1;
  detail::ExactTensor t(dim);
  for (int i = 0; i < n; ++i) t.add(2 * i, 2 * i + 1, 2 * n, 1);
  std::vector<std::string> labels;
  for (int i = 1; i <= 2 * n; ++i) labels.push_back("X" + std::to_string(i));
  labels.push_back("T");
  return detail::finish_builtin({2 * n, 1}, std::move(t), "heisenberg(" + std::to_string(n) + ")",
                                std::move(labels));
}

/// Index of e_j in the jet basis (e^(k), e_k, e_{k-1}, ..., e_0).
inline int jet_index(int k, int j) { return 1 + (k - j); }

/// Lie algebra of J^k(R): basis (e^(k), e_k, ..., e_0), the only nonzero
/// relations are [e_j, e^(k)] = e_{j-1} for j = 1..k.
namespace detail {
inline ExactTensor jet_tensor(int k) {
  ExactTensor t(k + 2);
  for (int j = 1; j <= k; ++j) t.add(jet_index(k, j), 0, jet_index(k, j - 1), 1);
  return t;
}
}  // namespace detail

inline AlgebraPtr jet(int k) {
  if (k < 1) throw UnsupportedError("jet(k) needs k >= 1");
  detail::ExactTensor t = detail::jet_tensor(k);
  std::vector<int> dims{2};
  for (int j = 0; j < k; ++j) dims.push_back(1);
  std::vector<std::string> labels{"e^(" + std::to_string(k) + ")"};
  for (int j = k; j >= 0; --j) labels.push_back("e_" + std::to_string(j));
  return detail::finish_builtin(std::move(dims), std::move(t), "jet(" + std::to_string(k) + ")", std::move(labels));
}

/// Free nilpotent algebra of the given rank and step <= 3.
///
/// Layer 2 basis: [x_i, x_j], i<j. Layer 3 basis: the Hall words [[x_i, x_j], x_l]
/// with i<j and l>=i, (rank^3 - rank)/3 of them.
inline AlgebraPtr free_nilpotent(int rank, int step) {
  if (step < 1 || step > 3) throw UnsupportedError("free_nilpotent supports step 1..3, got " + std::to_string(step));
  if (rank < 2 && step > 1) throw UnsupportedError("free_nilpotent of step > 1 needs rank >= 2");
  if (rank < 1) throw UnsupportedError("free_nilpotent needs rank >= 1");
  if (step == 1) return abelian(rank);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) pairs.emplace_back(i, j);
  auto pair_index = [&](int i, int j) {
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (pairs[p].first == i && pairs[p].second == j) return static_cast<int>(p);
    throw InternalError("free_nilpotent: unknown pair");
  };
  std::vector<std::array<int, 3>> hall;
  if (step == 3) {
    for (const auto& [i, j] : pairs)
      for (int l = i; l < rank; ++l) hall.push_back({i, j, l});
  }
  auto hall_index = [&](int i, int j, int l) {
    for (std::size_t h = 0; h < hall.size(); ++h)
      if (hall[h] == std::array<int, 3>{i, j, l}) return static_cast<int>(h);
    throw InternalError("free_nilpotent: unknown Hall word");
  };

  const int m1 = rank;
  const int m2 = static_cast<int>(pairs.size());
  const int m3 = static_cast<int>(hall.size());
  const int dim = m1 + m2 + m3;
  detail::ExactTensor t(dim);
  std::vector<std::string> labels;
  for (int i = 0; i < m1; ++i) labels.push_back("x" + std::to_string(i + 1));
  for (const auto& [i, j] : pairs) labels.push_back("[x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1) + "]");
  for (const auto& h : hall) {
    labels.push_back("[[x" + std::to_string(h[0] + 1) + ",x" + std::to_string(h[1] + 1) + "],x" +
                     std::to_string(h[2] + 1) + "]");
  }

  for (const auto& [i, j] : pairs) t.add(i, j, m1 + pair_index(i, j), 1);
  if (step == 3) {
    // [[x_i,x_j], x_l] for l < i rewritten by Jacobi:
    // [[x_i,x_j],x_l] = [[x_l,x_j],x_i] - [[x_l,x_i],x_j].
    for (const auto& [i, j] : pairs) {
      const int e = m1 + pair_index(i, j);
      for (int l = 0; l < rank; ++l) {
        if (l >= i) {
          t.add(e, l, m1 + m2 + hall_index(i, j, l), 1);
        } else {
          t.add(e, l, m1 + m2 + hall_index(l, j, i), 1);
          t.add(e, l, m1 + m2 + hall_index(l, i, j), -1);
        }
      }
    }
  }
  std::vector<int> dims{m1, m2};
  if (step == 3) dims.push_back(m3);
  return detail::finish_builtin(std::move(dims), std::move(t),
                                "free_nilpotent(" + std::to_string(rank) + "," + std::to_string(step) + ")",
                                std::move(labels));
}

/// Dispatch by name: "heisenberg" (n), "jet" (k), "free_nilpotent" (rank, step),
/// "abelian" (n).
inline AlgebraPtr builtin(const std::string& name, const std::vector<int>& params) {
  auto need = [&](std::size_t count) {
    if (params.size() != count) {
      throw InputError("builtin '" + name + "' takes " + std::to_string(count) + " parameter(s), got " +
                       std::to_string(params.size()));
    }
  };
  if (name == "heisenberg") {
    need(1);
    return heisenberg(params[0]);
  }
  if (name == "jet") {
    need(1);
    return jet(params[0]);
  }
  if (name == "free_nilpotent" || name == "free") {
    need(2);
    return free_nilpotent(params[0], params[1]);
  }
  if (name == "abelian") {
    need(1);
    return abelian(params[0]);
  }
  throw UnsupportedError("unknown builtin algebra '" + name + "'");
}

}  // namespace carnot
