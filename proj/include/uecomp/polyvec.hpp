#pragma once

#include <memory>
#include <optional>

#include "uecomp/ball.hpp"
#include "uecomp/report.hpp"

namespace uecomp {

// g_n(x) = sqrt(chi_x^{k(n)} / ||chi_{k(n)}||_1): the square-root-normalized
// indicator of B(x, k(n)). Supports are never materialized densely; inner
// products come from ball intersection counts.
class PolyFamily {
 public:
  PolyFamily(std::shared_ptr<const GroupModel> model, KSearchResult k,
             const BallBudget& budget = {});

  const GroupModel& model() const { return *model_; }
  const KSearchResult& k_result() const { return k_; }
  int64_t k() const { return k_.k; }
  uint64_t ball_k_count() const { return ball_k_count_; }
  double support_radius() const { return static_cast<double>(k_.k); }
  // S_n^G = n^{3/2+5p}; containment of supp(g_n) needs k(n) <= S_n^G
  double lemma_support_bound() const;
  bool support_contained() const;

  // <g_n(x), g_n(y)> = |B(x,k) /\ B(y,k)| / |B_k|
  double inner(const Element& x, const Element& y) const;
  double inner_from_difference(const Element& z) const;
  uint64_t intersection_count(const Element& z) const;

  // explicit support of g_n(x) with its constant weight; feasible only for
  // small k (used by tests and the extension combiner)
  void materialize_support(const BallBudget& budget = {});
  std::vector<Element> support(const Element& x) const;
  double weight() const;

 private:
  std::shared_ptr<const GroupModel> model_;
  KSearchResult k_;
  uint64_t ball_k_count_;
  std::optional<Ball> ball_k_;  // materialized only without a closed form
};

PolyFamily poly_family(std::shared_ptr<const GroupModel> model, int64_t n,
                       double p, const BallBudget& budget = {});

// Exhaustive check of the two polynomial-growth lemma conditions:
//  (1) |1 - <g_n(x), g_n(y)>| <= 1/(4 n^{1+2p}) whenever d(x,y) <= sqrt(n),
//      checked over every difference element z with l(z) <= sqrt(n), which
//      by left invariance covers all pairs of the group;
//  (2) supp(g_n(x)) contained in B(x, n^{3/2+5p}), i.e. k(n) <= n^{3/2+5p}.
VerificationReport verify_poly_lemma(std::shared_ptr<const GroupModel> model,
                                     int64_t n, double p,
                                     const BallBudget& budget = {});

}  // namespace uecomp
