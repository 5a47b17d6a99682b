#include "uecomp/polyvec.hpp"

#include <cmath>
#include <limits>

namespace uecomp {

PolyFamily::PolyFamily(std::shared_ptr<const GroupModel> model, KSearchResult k,
                       const BallBudget& budget)
    : model_(std::move(model)), k_(k) {
  double kr = static_cast<double>(k_.k);
  if (model_->ball_count_closed(kr) &&
      model_->ball_intersection_closed(kr, model_->identity())) {
    ball_k_count_ = *model_->ball_count_closed(kr);
  } else {
    ball_k_.emplace(enumerate_ball(*model_, kr, budget));
    ball_k_count_ = ball_k_->size();
  }
  if (ball_k_count_ == 0)
    throw InvalidSpecError("empty ball for indicator family");
}

double PolyFamily::lemma_support_bound() const {
  return std::pow(static_cast<double>(k_.n), 1.5 + 5.0 * k_.p);
}

bool PolyFamily::support_contained() const {
  return static_cast<double>(k_.k) <= lemma_support_bound();
}

uint64_t PolyFamily::intersection_count(const Element& z) const {
  double kr = static_cast<double>(k_.k);
  if (auto closed = model_->ball_intersection_closed(kr, z)) return *closed;
  // generic route: count u in B(1,k) with d(z, u) <= k
  uint64_t count = 0;
  for (const BallEntry& e : ball_k_->entries())
    if (model_->dist(z, e.x) <= kr) ++count;
  return count;
}

double PolyFamily::inner_from_difference(const Element& z) const {
  return static_cast<double>(intersection_count(z)) /
         static_cast<double>(ball_k_count_);
}

double PolyFamily::inner(const Element& x, const Element& y) const {
  return inner_from_difference(model_->mul(model_->inv(x), y));
}

void PolyFamily::materialize_support(const BallBudget& budget) {
  if (!ball_k_)
    ball_k_.emplace(enumerate_ball(*model_, static_cast<double>(k_.k), budget));
}

std::vector<Element> PolyFamily::support(const Element& x) const {
  if (!ball_k_)
    throw UnsupportedModelError(
        "support not materialized; call materialize_support first");
  std::vector<Element> out;
  out.reserve(ball_k_->size());
  for (const BallEntry& e : ball_k_->entries()) out.push_back(model_->mul(x, e.x));
  return out;
}

double PolyFamily::weight() const {
  return 1.0 / std::sqrt(static_cast<double>(ball_k_count_));
}

PolyFamily poly_family(std::shared_ptr<const GroupModel> model, int64_t n,
                       double p, const BallBudget& budget) {
  BallCountCache counts(*model, budget);
  KSearchResult k = find_k_n(*model, n, p, counts);
  return PolyFamily(std::move(model), k, budget);
}

VerificationReport verify_poly_lemma(std::shared_ptr<const GroupModel> model,
                                     int64_t n, double p,
                                     const BallBudget& budget) {
  PolyFamily family = poly_family(model, n, p, budget);
  double rn = std::sqrt(static_cast<double>(n));
  double near_bound =
      1.0 / (4.0 * std::pow(static_cast<double>(n), 1.0 + 2.0 * p));
  constexpr double kTie = 1e-12;

  // left invariance turns the pair condition into one over differences
  ReportRow near{"near", n, 0, 0, std::numeric_limits<double>::infinity(),
                 false, "k=" + std::to_string(family.k())};
  Ball diffs = enumerate_ball(*model, rn, budget);
  for (const BallEntry& e : diffs.entries()) {
    double gap = 1.0 - family.inner_from_difference(e.x);
    double margin = near_bound - gap;
    ++near.pairs_checked;
    near.worst_margin = std::min(near.worst_margin, margin);
    if (margin < -kTie) ++near.violations;
  }

  ReportRow support{"support", n, 1, 0, 0.0, false, ""};
  support.worst_margin =
      family.lemma_support_bound() - static_cast<double>(family.k());
  if (!family.support_contained()) {
    support.violations = 1;
    support.note = "k(n) exceeds n^{3/2+5p}; the lemma only claims n >= n0";
  }

  VerificationReport report;
  report.rows = {near, support};
  return report;
}

}  // namespace uecomp
