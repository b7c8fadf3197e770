#include <gtest/gtest.h>

#include "support.hpp"

using namespace carnot;

namespace {

const std::vector<double> kEps{0.1, 0.5, 2.0, 10.0};

}  // namespace

TEST(Isomorphisms, CoordinateChangesAreStrataPreservingIsomorphisms) {
  for (const auto& g : {jet(2), jet(3), heisenberg(2), free_nilpotent(2, 3)}) {
    const auto samples = sample_box_ball(*g, 200, 5);
    for (const auto& map : {second_to_first_map(g), first_to_second_map(g)}) {
      EXPECT_LE(check_homomorphism(map, samples), 1e-9) << g->name() << " " << map.name;
      EXPECT_LE(check_dilation_commutation(map, samples, kEps), 1e-9) << g->name() << " " << map.name;
      EXPECT_LE(check_round_trip(map, samples), 1e-12) << g->name() << " " << map.name;
      const auto leak = strata_preservation_check(map);
      EXPECT_LE(leak.leakage, 1e-6) << g->name() << " " << map.name;
      // Diagonal blocks are identities: the differential at the identity is the identity.
      EXPECT_LE((leak.jacobian - Matrix::Identity(g->dim(), g->dim())).norm(), 1e-6);
    }
  }
}

TEST(Isomorphisms, LayerSwapIsNeither) {
  for (const auto& g : {jet(2), heisenberg(2)}) {
    const auto model = make_model(g, ModelKind::FirstKind);
    const auto map = layer_swap_map(model);
    const auto samples = sample_box_ball(*g, 200, 6);
    EXPECT_GT(check_homomorphism(map, samples), 1e-2);
    EXPECT_GT(check_dilation_commutation(map, samples, kEps), 1e-2);
    EXPECT_NEAR(strata_preservation_check(map).leakage, 1.0, 1e-6);
    EXPECT_EQ(check_round_trip(map, samples), 0.0);
  }
  EXPECT_THROW(layer_swap_map(make_model(abelian(2), ModelKind::FirstKind)), InputError);
}

TEST(Isomorphisms, ShearHomogeneityDependsOnPower) {
  const auto g = heisenberg(1);
  const auto model = make_model(g, ModelKind::FirstKind);
  const auto samples = sample_box_ball(*g, 200, 7);
  EXPECT_GT(check_dilation_commutation(shear_map(model, 1), samples, kEps), 1e-2);
  EXPECT_LE(check_dilation_commutation(shear_map(model, 2), samples, kEps), 1e-12);
  // Both shears fix the strata at first order only when the power exceeds one.
  EXPECT_GT(strata_preservation_check(shear_map(model, 1)).leakage, 0.5);
  EXPECT_LE(strata_preservation_check(shear_map(model, 2)).leakage, 1e-6);
  EXPECT_LE(check_round_trip(shear_map(model, 1), samples), 1e-15);
}

TEST(Isomorphisms, IdentityPassesEverything) {
  const auto model = make_model(jet(3), ModelKind::Jet);
  const auto map = identity_group_map(model);
  const auto samples = sample_box_ball(model->algebra(), 100, 8);
  EXPECT_EQ(check_homomorphism(map, samples), 0.0);
  EXPECT_EQ(check_dilation_commutation(map, samples, kEps), 0.0);
  EXPECT_LE(strata_preservation_check(map).leakage, 1e-9);
  const auto scan = bilipschitz_scan(map, samples);
  EXPECT_EQ(scan.pairs, 50u);
  EXPECT_DOUBLE_EQ(scan.min_ratio, 1.0);
  EXPECT_DOUBLE_EQ(scan.max_ratio, 1.0);
}

TEST(Isomorphisms, CoordinateChangeIsBoxBilipschitzOnTheBall) {
  const auto g = jet(3);
  const auto scan = bilipschitz_scan(second_to_first_map(g), sample_box_ball(*g, 2000, 9));
  EXPECT_EQ(scan.pairs, 1000u);
  EXPECT_GT(scan.min_ratio, 0.05);
  EXPECT_LT(scan.max_ratio, 20.0);
}

TEST(Isomorphisms, BoxBallSamplesRespectRadius) {
  const auto g = jet(2);
  for (const auto& v : sample_box_ball(*g, 500, 10, 0.5)) EXPECT_LE(box_norm(*g, v), 0.5 + 1e-15);
  EXPECT_EQ(sample_box_ball(*g, 3, 4), sample_box_ball(*g, 3, 4));
}
