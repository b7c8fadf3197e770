#pragma once

// Concrete group laws on R^n for a stratified algebra.
//
//   FirstKind      exponential coordinates, product by BCH
//   SecondKind     coordinates of Phi(a) = exp(a_1 X^1) ... exp(a_n X^n)
//   Jet            J^k(R) in coordinates (x, u_k, ..., u_0), closed form
//   Step2Explicit  first-kind step-2 law written out in the alpha constants
//   Step3Explicit  first-kind step-3 law written out in alpha and beta
//
// The Jet law is the second-kind law of jet(k) with the basis order
// (e^(k), e_k, ..., e_0); Step2Explicit/Step3Explicit are first-kind laws.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "carnot/bch.hpp"
#include "carnot/lie_core.hpp"

namespace carnot {

enum class ModelKind { FirstKind, SecondKind, Jet, Step2Explicit, Step3Explicit };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::FirstKind: return "first";
    case ModelKind::SecondKind: return "second";
    case ModelKind::Jet: return "jet";
    case ModelKind::Step2Explicit: return "step2";
    case ModelKind::Step3Explicit: return "step3";
  }
  return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
  if (s == "first" || s == "first_kind") return ModelKind::FirstKind;
  if (s == "second" || s == "second_kind") return ModelKind::SecondKind;
  if (s == "jet") return ModelKind::Jet;
  if (s == "step2") return ModelKind::Step2Explicit;
  if (s == "step3") return ModelKind::Step3Explicit;
  throw InputError("unknown group model '" + s + "' (expected first|second|jet|step2|step3)");
}

/// Coordinates of exp(a_1 X^1) * ... * exp(a_n X^n) in the first kind.
inline Vector second_to_first(const StratifiedAlgebra& g, const Vector& a) {
  Vector out = Vector::Zero(g.dim());
  Vector e = Vector::Zero(g.dim());
  bool started = false;
  for (int i = 0; i < g.dim(); ++i) {
    if (a[i] == 0.0) continue;
    e.setZero();
    e[i] = a[i];
    out = started ? bch_product(g, out, e) : e;
    started = true;
  }
  return out;
}

/// Inverse of second_to_first by layer-ascending back-substitution.
///
/// The layer-j block of second_to_first(a) equals a_j plus a polynomial in the
/// blocks of lower layers, so after pass p the first p layers are exact and
/// `step` passes suffice.
inline Vector first_to_second(const StratifiedAlgebra& g, const Vector& b) {
  Vector a = b;
  for (int pass = 0; pass < g.step(); ++pass) a += b - second_to_first(g, a);
  const double err = (second_to_first(g, a) - b).cwiseAbs().maxCoeff();
  const double scale = 1.0 + std::pow(b.cwiseAbs().maxCoeff(), static_cast<double>(g.step()));
  if (!(err <= 1e-9 * scale)) {
    throw InternalError("second-kind back-substitution did not converge (residual " + std::to_string(err) + ")");
  }
  return a;
}

/// A group law for one algebra, validated at construction.
class GroupModel {
 public:
  static std::shared_ptr<const GroupModel> create(AlgebraPtr algebra, ModelKind kind) {
    if (!algebra) throw InputError("group model without algebra");
    return std::shared_ptr<const GroupModel>(new GroupModel(std::move(algebra), kind));
  }

  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const StratifiedAlgebra& algebra() const { return *algebra_; }
  ModelKind kind() const { return kind_; }
  int dim() const { return algebra_->dim(); }
  /// k for Jet models, 0 otherwise.
  int jet_order() const { return jet_k_; }

  Vector identity() const { return Vector::Zero(dim()); }

  Vector multiply(const Vector& a, const Vector& b) const {
    switch (kind_) {
      case ModelKind::FirstKind: return bch_product(*algebra_, a, b);
      case ModelKind::SecondKind:
        return first_to_second(*algebra_,
                               bch_product(*algebra_, second_to_first(*algebra_, a), second_to_first(*algebra_, b)));
      case ModelKind::Jet: return jet_multiply(a, b);
      case ModelKind::Step2Explicit: return step2_multiply(a, b);
      case ModelKind::Step3Explicit: return step3_multiply(a, b);
    }
    throw InternalError("unknown model");
  }

  Vector inverse(const Vector& a) const {
    switch (kind_) {
      case ModelKind::FirstKind:
      case ModelKind::Step2Explicit:
      case ModelKind::Step3Explicit: return -a;
      case ModelKind::SecondKind: return first_to_second(*algebra_, -second_to_first(*algebra_, a));
      case ModelKind::Jet: return jet_inverse(a);
    }
    throw InternalError("unknown model");
  }

  /// Layer-j block scaled by eps^j.
  Vector dilate(double eps, const Vector& a) const {
    Vector out = a;
    double f = 1.0;
    for (int j = 1; j <= algebra_->step(); ++j) {
      f *= eps;
      out.segment(algebra_->layer_offset(j), algebra_->layer_dim(j)) *= f;
    }
    return out;
  }

  /// Coordinates of the same group point in the first kind.
  Vector to_first(const Vector& a) const {
    switch (kind_) {
      case ModelKind::SecondKind:
      case ModelKind::Jet: return second_to_first(*algebra_, a);
      default: return a;
    }
  }
  Vector from_first(const Vector& a) const {
    switch (kind_) {
      case ModelKind::SecondKind:
      case ModelKind::Jet: return first_to_second(*algebra_, a);
      default: return a;
    }
  }

  // Step-2/3 constants: alpha_k^{ij} = [d_i,d_j] along e_k, beta_m^{ik} = [d_i,e_k] along f_m.
  double alpha(int k, int i, int j) const { return algebra_->c(i, j, m1_ + k); }
  double beta(int m, int i, int k) const { return algebra_->c(i, m1_ + k, m1_ + m2_ + m); }
  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int m3() const { return m3_; }

  /// sum_{i<j} alpha_k^{ij} (A_i a_j - a_i A_j) for every k.
  Vector alpha_form(const Vector& big, const Vector& small) const {
    Vector g = Vector::Zero(m2_);
    for (int k = 0; k < m2_; ++k)
      for (int i = 0; i < m1_; ++i)
        for (int j = i + 1; j < m1_; ++j) g[k] += alpha(k, i, j) * (big[i] * small[j] - small[i] * big[j]);
    return g;
  }

 private:
  GroupModel(AlgebraPtr algebra, ModelKind kind) : algebra_(std::move(algebra)), kind_(kind) {
    if (!algebra_->is_valid()) throw InputError("algebra " + algebra_->name() + " failed validation");
    const int r = algebra_->step();
    m1_ = algebra_->layer_dim(1);
    m2_ = r >= 2 ? algebra_->layer_dim(2) : 0;
    m3_ = r >= 3 ? algebra_->layer_dim(3) : 0;
    if (kind_ == ModelKind::Jet) {
      jet_k_ = algebra_->dim() - 2;
      std::vector<int> dims{2};
      dims.resize(static_cast<std::size_t>(std::max(jet_k_, 0)) + 1, 1);
      if (jet_k_ < 1 || algebra_->layer_dims() != dims || algebra_->constants() != detail::jet_tensor(jet_k_).c) {
        throw InputError("Jet model requires the jet(k) algebra with n = k+2, got " + algebra_->name());
      }
    }
    if (kind_ == ModelKind::Step2Explicit && r != 2) {
      throw InputError("Step2Explicit model requires a step-2 algebra, got step " + std::to_string(r));
    }
    if (kind_ == ModelKind::Step3Explicit && r != 3) {
      throw InputError("Step3Explicit model requires a step-3 algebra, got step " + std::to_string(r));
    }
  }

  Vector jet_multiply(const Vector& a, const Vector& b) const {
    const int k = jet_k_;
    const double y = b[0];
    Vector w(k + 2);
    w[0] = a[0] + b[0];
    for (int s = k; s >= 0; --s) {
      double sum = a[jet_index(k, s)] + b[jet_index(k, s)];
      double term = 1.0;
      for (int j = s + 1; j <= k; ++j) {
        term *= y / static_cast<double>(j - s);  // y^{j-s}/(j-s)!
        sum += a[jet_index(k, j)] * term;
      }
      w[jet_index(k, s)] = sum;
    }
    return w;
  }

  Vector jet_inverse(const Vector& a) const {
    const int k = jet_k_;
    const double mx = -a[0];
    Vector w(k + 2);
    w[0] = mx;
    for (int s = 0; s <= k; ++s) {
      double sum = 0.0;
      double term = 1.0;
      for (int j = s; j <= k; ++j) {
        if (j > s) term *= mx / static_cast<double>(j - s);
        sum += term * a[jet_index(k, j)];
      }
      w[jet_index(k, s)] = -sum;
    }
    return w;
  }

  Vector step2_multiply(const Vector& a, const Vector& b) const {
    Vector out = a + b;
    out.segment(m1_, m2_) += 0.5 * alpha_form(a, b);
    return out;
  }

  Vector step3_multiply(const Vector& a, const Vector& b) const {
    Vector out = a + b;
    const Vector gamma = alpha_form(a, b);
    out.segment(m1_, m2_) += 0.5 * gamma;
    for (int m = 0; m < m3_; ++m) {
      double half = 0.0;
      double twelfth = 0.0;
      for (int i = 0; i < m1_; ++i)
        for (int k = 0; k < m2_; ++k) {
          const double bt = beta(m, i, k);
          if (bt == 0.0) continue;
          half += bt * (a[i] * b[m1_ + k] - a[m1_ + k] * b[i]);
          twelfth += (a[i] - b[i]) * gamma[k] * bt;
        }
      out[m1_ + m2_ + m] += 0.5 * half + twelfth / 12.0;
    }
    return out;
  }

  AlgebraPtr algebra_;
  ModelKind kind_;
  int jet_k_ = 0;
  int m1_ = 0, m2_ = 0, m3_ = 0;
};

using ModelPtr = std::shared_ptr<const GroupModel>;

inline ModelPtr make_model(AlgebraPtr algebra, ModelKind kind) { return GroupModel::create(std::move(algebra), kind); }

/// A point of a group model. Elements only combine within one model of one algebra.
class GroupElement {
 public:
  GroupElement(ModelPtr model, Vector coords) : model_(std::move(model)), coords_(std::move(coords)) {
    if (!model_) throw InputError("group element without model");
    if (coords_.size() != model_->dim()) {
      throw InputError("element of length " + std::to_string(coords_.size()) + " in group of dimension " +
                       std::to_string(model_->dim()));
    }
    if (!coords_.allFinite()) throw InputError("group element has non-finite coordinates");
  }
  static GroupElement identity(ModelPtr model) {
    Vector z = model->identity();
    return {std::move(model), std::move(z)};
  }

  const Vector& coords() const { return coords_; }
  const ModelPtr& model() const { return model_; }
  ModelKind kind() const { return model_->kind(); }
  const StratifiedAlgebra& algebra() const { return model_->algebra(); }
  int dim() const { return model_->dim(); }

 private:
  ModelPtr model_;
  Vector coords_;
};

inline void check_same_model(const GroupElement& a, const GroupElement& b) {
  if (a.model() == b.model()) return;
  if (a.kind() != b.kind() || a.model()->algebra_ptr() != b.model()->algebra_ptr()) {
    throw InputError("cannot combine elements of models '" + to_string(a.kind()) + "' (" + a.algebra().name() +
                     ") and '" + to_string(b.kind()) + "' (" + b.algebra().name() + ")");
  }
}

inline GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  check_same_model(a, b);
  return {a.model(), a.model()->multiply(a.coords(), b.coords())};
}

inline GroupElement inverse(const GroupElement& a) { return {a.model(), a.model()->inverse(a.coords())}; }

/// Positive dilation factor.
class DilationFactor {
 public:
  explicit DilationFactor(double eps) : eps_(eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("dilation factor must be positive and finite");
  }
  double value() const { return eps_; }

 private:
  double eps_;
};

inline GroupElement dilate(DilationFactor eps, const GroupElement& a) {
  return {a.model(), a.model()->dilate(eps.value(), a.coords())};
}

/// Same group point in the first-kind model of the algebra.
inline GroupElement to_first_kind(const GroupElement& a) {
  if (a.kind() == ModelKind::FirstKind) return a;
  return {make_model(a.model()->algebra_ptr(), ModelKind::FirstKind), a.model()->to_first(a.coords())};
}

/// Same group point in the second-kind model of the algebra.
inline GroupElement to_second_kind(const GroupElement& a) {
  if (a.kind() == ModelKind::SecondKind) return a;
  const Vector first = a.model()->to_first(a.coords());
  return {make_model(a.model()->algebra_ptr(), ModelKind::SecondKind), first_to_second(a.algebra(), first)};
}

/// Last coordinate of p^{-1} * q in J^k(R):
///   v_0 - u_0 - sum_{j=1}^k u_j/j! (y - x)^j.
inline double jet_inverse_product_last(const GroupElement& p, const GroupElement& q) {
  check_same_model(p, q);
  if (p.kind() != ModelKind::Jet) throw InputError("jet_inverse_product_last needs Jet elements");
  const int k = p.model()->jet_order();
  const Vector& u = p.coords();
  const Vector& v = q.coords();
  const double d = v[0] - u[0];
  double out = v[jet_index(k, 0)] - u[jet_index(k, 0)];
  double term = 1.0;
  for (int j = 1; j <= k; ++j) {
    term *= d / static_cast<double>(j);
    out -= u[jet_index(k, j)] * term;
  }
  return out;
}

/// a^{-1} * b for step-3 first-kind coordinates in closed form.
inline GroupElement step3_inverse_product(const GroupElement& a, const GroupElement& b) {
  check_same_model(a, b);
  const bool ok = a.kind() == ModelKind::Step3Explicit ||
                  (a.kind() == ModelKind::FirstKind && a.algebra().step() == 3);
  if (!ok) throw InputError("step3_inverse_product needs step-3 first-kind elements");
  const GroupModel& mdl = *a.model();
  const int m1 = mdl.m1(), m2 = mdl.m2(), m3 = mdl.m3();
  const Vector& A = a.coords();
  const Vector& x = b.coords();
  Vector out = x - A;
  const Vector gamma = mdl.alpha_form(A, x);
  out.segment(m1, m2) -= 0.5 * gamma;
  for (int m = 0; m < m3; ++m) {
    double half = 0.0;
    double twelfth = 0.0;
    for (int i = 0; i < m1; ++i)
      for (int k = 0; k < m2; ++k) {
        const double bt = mdl.beta(m, i, k);
        if (bt == 0.0) continue;
        half += bt * (A[i] * x[m1 + k] - A[m1 + k] * x[i]);
        twelfth += (A[i] + x[i]) * gamma[k] * bt;
      }
    out[m1 + m2 + m] += -0.5 * half + twelfth / 12.0;
  }
  return {a.model(), out};
}

}  // namespace carnot
