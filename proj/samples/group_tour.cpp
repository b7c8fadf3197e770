// One Heisenberg group element seen through every coordinate model, plus
// its homogeneous norm and a Carnot-Caratheodory distance estimate.

#include <cstdio>

#include "carnot/carnot.hpp"

using namespace carnot;

namespace {

void print(const char* label, const Vector& v) {
  std::printf("  %-22s [", label);
  for (Eigen::Index i = 0; i < v.size(); ++i) std::printf("%s% .6f", i ? ", " : "", v[i]);
  std::printf("]\n");
}

}  // namespace

int main() {
  const auto g = heisenberg(1);
  const Vector a = Eigen::Vector3d(1.0, 0.5, -0.25), b = Eigen::Vector3d(-0.3, 2.0, 1.0);

  std::printf("products in heisenberg(1)\n");
  for (auto kind : {ModelKind::FirstKind, ModelKind::SecondKind, ModelKind::Step2Explicit}) {
    const auto m = make_model(g, kind);
    const GroupElement x(m, m->from_first(a)), y(m, m->from_first(b));
    const GroupElement xy = multiply(x, y);
    // Different coordinates, same group point.
    std::printf("%s\n", to_string(kind).c_str());
    print("a*b (model coords)", xy.coords());
    print("a*b (first kind)", m->to_first(xy.coords()));
  }

  const auto m = make_model(g, ModelKind::FirstKind);
  const GroupElement p(m, a);
  std::printf("\nbox norm |a| = %.6f, |dilate(2, a)| = %.6f\n", box_norm(p), box_norm(dilate(DilationFactor(2.0), p)));

  CcOptions opt;
  opt.seed = 1;
  const auto est = cc_upper_bound(GroupElement::identity(m), GroupElement(m, Vector(Eigen::Vector3d(0, 0, 1))), opt);
  std::printf("cc distance 0 -> (0,0,1) <= %.5f (converged: %s); circle bound 2 sqrt(pi) = %.5f\n", est.length,
              est.converged ? "yes" : "no", 2.0 * std::sqrt(std::numbers::pi));
  return 0;
}
