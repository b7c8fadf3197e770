#pragma once

// Baker-Campbell-Hausdorff product in nilpotent algebras (coordinates of the
// first kind).
//
// The series is enumerated as Dynkin's double sum
//   sum_n (-1)^{n+1}/n  sum_{p_i+q_i>0} 1/C_{p,q} (ad X)^{p_1}(ad Y)^{q_1}...W(p_n,q_n)
// with C_{p,q} = p_1! q_1! ... p_n! q_n! * sum(p_i+q_i). Each composition
// contributes a right-nested bracket word in the letters X, Y; coefficients of
// equal words are merged in exact rational arithmetic and words whose last two
// letters coincide are dropped (they end in [X,X] or [Y,Y]). Terms of total
// degree > step vanish by nilpotency, so the series is cut at the step.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "carnot/lie_core.hpp"
#include "carnot/rational.hpp"

namespace carnot {

/// Evaluation plan for all BCH bracket words up to a given degree.
///
/// Words share suffixes: node t has value [letter_t, value(child_t)], and leaf
/// nodes 0 and 1 are X and Y. Nodes are ordered so children come first.
struct BchPlan {
  struct Node {
    std::uint8_t letter;  // 0 = X, 1 = Y
    int child;            // -1 for the leaves
    int degree;
  };
  struct Term {
    int node;
    Rational coefficient;
    double weight;
    int degree;
    std::string word;  // letters 'X'/'Y', evaluated right-nested
  };

  int max_degree = 0;
  std::vector<Node> nodes;
  std::vector<Term> terms;

  static BchPlan build(int max_degree) {
    BchPlan plan;
    plan.max_degree = max_degree;
    std::map<std::string, Rational> words;

    std::vector<Rational> factorial{Rational(1)};
    for (int i = 1; i <= max_degree; ++i) factorial.push_back(factorial.back() * Rational(i));

    // Depth-first over block sequences (p_1,q_1),...,(p_n,q_n).
    std::string word;
    auto emit = [&](int blocks, Rational prod_fact) {
      const int degree = static_cast<int>(word.size());
      const std::size_t d = word.size();
      if (d >= 2 && word[d - 1] == word[d - 2]) return;
      Rational coef = Rational(blocks % 2 == 1 ? 1 : -1, blocks) / (prod_fact * Rational(degree));
      words[word] += coef;
    };
    auto recurse = [&](auto&& self, int blocks, Rational prod_fact) -> void {
      const int used = static_cast<int>(word.size());
      for (int p = 0; p + used <= max_degree; ++p) {
        for (int q = 0; p + q + used <= max_degree; ++q) {
          if (p + q == 0) continue;
          const std::size_t mark = word.size();
          word.append(static_cast<std::size_t>(p), 'X');
          word.append(static_cast<std::size_t>(q), 'Y');
          const Rational pf = prod_fact * factorial[static_cast<std::size_t>(p)] * factorial[static_cast<std::size_t>(q)];
          emit(blocks + 1, pf);
          self(self, blocks + 1, pf);
          word.resize(mark);
        }
      }
    };
    recurse(recurse, 0, Rational(1));

    std::map<std::string, int> node_of;
    plan.nodes.push_back({0, -1, 1});
    plan.nodes.push_back({1, -1, 1});
    node_of["X"] = 0;
    node_of["Y"] = 1;
    auto node_for = [&](auto&& self, const std::string& suffix) -> int {
      if (auto it = node_of.find(suffix); it != node_of.end()) return it->second;
      const int child = self(self, suffix.substr(1));
      plan.nodes.push_back({static_cast<std::uint8_t>(suffix.front() == 'Y'), child, static_cast<int>(suffix.size())});
      const int id = static_cast<int>(plan.nodes.size()) - 1;
      node_of[suffix] = id;
      return id;
    };
    for (const auto& [w, coef] : words) {
      if (coef.is_zero()) continue;
      plan.terms.push_back({node_for(node_for, w), coef, coef.to_double(), static_cast<int>(w.size()), w});
    }
    return plan;
  }

  /// Sum of all terms with min_degree <= degree <= max_deg.
  Vector evaluate(const StratifiedAlgebra& g, const Vector& x, const Vector& y, int min_deg, int max_deg) const {
    std::vector<Vector> values(nodes.size());
    std::vector<char> needed(nodes.size(), 0);
    for (const auto& t : terms)
      if (t.degree >= min_deg && t.degree <= max_deg) needed[static_cast<std::size_t>(t.node)] = 1;
    for (std::size_t i = nodes.size(); i-- > 0;) {
      if (needed[i] && nodes[i].child >= 0) needed[static_cast<std::size_t>(nodes[i].child)] = 1;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!needed[i]) continue;
      const auto& nd = nodes[i];
      const Vector& letter = nd.letter == 0 ? x : y;
      values[i] = nd.child < 0 ? letter : bracket(g, letter, values[static_cast<std::size_t>(nd.child)]);
    }
    Vector out = Vector::Zero(g.dim());
    for (const auto& t : terms)
      if (t.degree >= min_deg && t.degree <= max_deg) out += t.weight * values[static_cast<std::size_t>(t.node)];
    return out;
  }
};

/// Process-wide cache of plans keyed by maximal degree. Plans are immutable once
/// published, so concurrent readers need no further locking.
class BchTermCache {
 public:
  static std::shared_ptr<const BchPlan> plan(int max_degree) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const BchPlan>> plans;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = plans[max_degree];
    if (!slot) slot = std::make_shared<const BchPlan>(BchPlan::build(max_degree));
    return slot;
  }
};

/// X * Y truncated at the step of the algebra (exact by nilpotency).
inline Vector bch_product(const StratifiedAlgebra& g, const Vector& x, const Vector& y) {
  const int r = g.step();
  return BchTermCache::plan(r)->evaluate(g, x, y, 1, r);
}

/// Only the homogeneous degree-`degree` part of the series.
inline Vector bch_degree_part(const StratifiedAlgebra& g, const Vector& x, const Vector& y, int degree) {
  return BchTermCache::plan(degree)->evaluate(g, x, y, degree, degree);
}

inline AlgebraVector bch_product(const AlgebraVector& x, const AlgebraVector& y) {
  AlgebraVector::check_same(x, y);
  return {x.algebra, bch_product(*x.algebra, x.coords, y.coords)};
}

/// X + Y + 1/2 [X,Y] + 1/12 ([X,[X,Y]] + [Y,[Y,X]]), exact for step <= 3.
inline Vector bch_order3(const StratifiedAlgebra& g, const Vector& x, const Vector& y) {
  if (g.step() > 3) throw UnsupportedError("bch_order3 requires step <= 3, algebra has step " + std::to_string(g.step()));
  const Vector xy = bracket(g, x, y);
  return x + y + 0.5 * xy + (1.0 / 12.0) * (bracket(g, x, xy) - bracket(g, y, xy));
}

inline AlgebraVector bch_order3(const AlgebraVector& x, const AlgebraVector& y) {
  AlgebraVector::check_same(x, y);
  return {x.algebra, bch_order3(*x.algebra, x.coords, y.coords)};
}

}  // namespace carnot
