#include <gtest/gtest.h>

#include "support.hpp"

using namespace carnot;

namespace {

/// Quaternionic Heisenberg algebra: [x, y]_a = <J_a x, y> for left
/// multiplication by i, j, k on R^4. Every pair of independent horizontal
/// vectors has a nonzero bracket.
AlgebraPtr quaternionic_heisenberg() {
  return StratifiedAlgebra::from_triples(
      {4, 3}, {{1, 2, 5, 1}, {3, 4, 5, 1}, {1, 3, 6, 1}, {2, 4, 6, -1}, {1, 4, 7, 1}, {2, 3, 7, 1}});
}

/// Largest bracket among orthonormalised witness columns, computed directly.
double direct_bracket_residual(const StratifiedAlgebra& g, const Matrix& basis) {
  const Matrix q = Eigen::HouseholderQR<Matrix>(basis).householderQ() * Matrix::Identity(basis.rows(), basis.cols());
  double worst = 0.0;
  for (int i = 0; i < q.cols(); ++i)
    for (int j = i + 1; j < q.cols(); ++j) {
      Vector x = Vector::Zero(g.dim()), y = Vector::Zero(g.dim());
      x.head(q.rows()) = q.col(i);
      y.head(q.rows()) = q.col(j);
      worst = std::max(worst, bracket(g, x, y).norm());
    }
  return worst;
}

}  // namespace

TEST(Rectifiability, QuaternionicAlgebraIsValid) { EXPECT_TRUE(validate(*quaternionic_heisenberg()).passed()); }

TEST(Rectifiability, HeisenbergTwoHasAbelianPlane) {
  const auto g = heisenberg(2);
  SearchOptions opt;
  opt.restarts = 50;
  opt.exact_fallback = false;
  const auto res = horizontal_subalgebra_search(*g, 2, opt);
  ASSERT_TRUE(res.found);
  ASSERT_TRUE(res.certificate.has_value());
  EXPECT_LE(res.certificate->residual, 1e-8);
  EXPECT_EQ(res.certificate->basis.rows(), 4);
  EXPECT_EQ(res.certificate->basis.cols(), 2);
  EXPECT_LE(direct_bracket_residual(*g, res.certificate->basis), 1e-8);
  EXPECT_LE(verify_witness(*g, res.certificate->basis), 1e-8);
}

TEST(Rectifiability, NoAbelianPlaneWhereBracketsAreInjective) {
  SearchOptions opt;
  opt.restarts = 200;
  opt.seed = 7;
  opt.exact_fallback = false;
  for (const auto& g : {heisenberg(1), jet(2), jet(3), jet(4), free_nilpotent(3, 2), quaternionic_heisenberg()}) {
    const auto res = horizontal_subalgebra_search(*g, 2, opt);
    EXPECT_FALSE(res.found) << g->name();
    EXPECT_EQ(res.restarts, 200) << g->name();
    EXPECT_GT(res.best_residual, 0.1) << g->name();
  }
}

TEST(Rectifiability, ExactDecision) {
  for (const auto& g : {heisenberg(1), jet(2), free_nilpotent(3, 2), quaternionic_heisenberg()}) {
    const auto d = exact_two_plane_decision(*g);
    EXPECT_FALSE(d.exists) << g->name();
    EXPECT_FALSE(d.witness.has_value());
    EXPECT_FALSE(d.method.empty());
  }
  // Heisenberg(2) and the abelian plane span{X1, X3}.
  for (const auto& g : {heisenberg(2), abelian(3)}) {
    const auto d = exact_two_plane_decision(*g);
    ASSERT_TRUE(d.exists) << g->name();
    ASSERT_TRUE(d.witness.has_value());
    EXPECT_LE(direct_bracket_residual(*g, d.witness->basis), 1e-10) << g->name();
  }
  EXPECT_THROW(exact_two_plane_decision(*heisenberg(3)), UnsupportedError);
}

TEST(Rectifiability, FallbackIsAttachedWhenSearchFails) {
  SearchOptions opt;
  opt.restarts = 5;
  const auto res = horizontal_subalgebra_search(*heisenberg(1), 2, opt);
  EXPECT_FALSE(res.found);
  ASSERT_TRUE(res.exact.has_value());
  EXPECT_FALSE(res.exact->exists);
}

TEST(Rectifiability, OneDimensionalAlwaysExists) {
  const auto res = horizontal_subalgebra_search(*jet(3), 1);
  EXPECT_TRUE(res.found);
  EXPECT_EQ(res.certificate->residual, 0.0);
}

TEST(Rectifiability, SearchIsSeedDeterministic) {
  SearchOptions opt;
  opt.restarts = 20;
  opt.seed = 11;
  opt.exact_fallback = false;
  const auto a = horizontal_subalgebra_search(*jet(3), 2, opt), b = horizontal_subalgebra_search(*jet(3), 2, opt);
  EXPECT_EQ(a.best_residual, b.best_residual);
}

TEST(Rectifiability, WitnessValidation) {
  const auto g = heisenberg(2);
  Matrix plane = Matrix::Zero(5, 2);
  plane(0, 0) = 1.0;
  plane(2, 1) = 1.0;
  EXPECT_EQ(verify_witness(*g, plane), 0.0);
  plane(1, 1) = 1.0;  // span{X1, X2 + X3}
  EXPECT_NEAR(verify_witness(*g, plane), 1.0 / std::sqrt(2.0), 1e-12);
  plane(4, 0) = 1.0;
  EXPECT_THROW(verify_witness(*g, plane), InputError);
  EXPECT_THROW(verify_witness(*g, Matrix::Ones(4, 2)), InputError);
  EXPECT_THROW(verify_witness(*g, Matrix::Zero(3, 2)), InputError);
  EXPECT_THROW(horizontal_subalgebra_search(*g, 5), InputError);
  EXPECT_THROW(horizontal_subalgebra_search(*g, 0), InputError);
}
