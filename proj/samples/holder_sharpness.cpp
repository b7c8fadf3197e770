// Sampled maps into the jet group: a contact lift, a map that is only
// 1/2-Hoelder into J^1, and the identity map's exponent 1/(k+1).

#include <cstdio>

#include "carnot/carnot.hpp"

using namespace carnot;

int main() {
  HolderOptions opt;
  opt.seed = 7;

  const auto lift = jet_lift_map(2, 41, 0.05);
  std::printf("jet lift of a smooth function, k=2: contact residual max %.2e, forced relations max %.2e\n",
              weak_contact_report(lift).max, jet_forced_relations(lift).max);

  const auto sharp = sharpness_map(1, 2.0, 81);
  const auto fit = holder_fit(sharp, opt);
  std::printf("sharpness map into J^1: residual max %.3f, alpha_hat %.3f (C_hat %.3f, %zu pairs)\n",
              weak_contact_report(sharp).max, fit.alpha_hat, fit.constant_hat, fit.pair_count);

  HolderOptions id = opt;
  id.max_scale = 1.0;
  id.min_cells = 2.0;
  for (int k = 1; k <= 3; ++k) {
    const auto f = holder_fit(identity_map(jet_model(k), 0.5, 9), id);
    std::printf("identity R^%d -> J^%d: alpha_hat %.3f, expected %.3f\n", k + 2, k, f.alpha_hat, 1.0 / (k + 1));
  }
  return 0;
}
