// Searches for abelian horizontal 2-planes. Where none exists the group
// is purely 2-unrectifiable, and the Pluecker test turns NotFound into a proof.

#include <cstdio>

#include "carnot/carnot.hpp"

using namespace carnot;

int main() {
  SearchOptions opt;
  opt.seed = 3;
  for (const auto& g : {heisenberg(1), heisenberg(2), jet(2), jet(3), free_nilpotent(3, 2)}) {
    const auto res = horizontal_subalgebra_search(*g, 2, opt);
    std::printf("%-20s ", g->name().c_str());
    if (res.found) {
      std::printf("witness found, residual %.1e\n", res.certificate->residual);
    } else if (res.exact && !res.exact->exists) {
      std::printf("no abelian 2-plane (exact, %s)\n", res.exact->method.c_str());
    } else {
      std::printf("not found in %d restarts (best %.3f)\n", res.restarts, res.best_residual);
    }
  }
  return 0;
}
