#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "uecomp/ball.hpp"
#include "uecomp/report.hpp"

namespace uecomp {

// A point of the Gromov boundary of a free group: an eventually periodic
// infinite reduced word, preperiod then repeated period.
struct BoundaryPoint {
  std::vector<int64_t> preperiod;
  std::vector<int64_t> period;

  int64_t letter(size_t i) const;
  void validate(int64_t rank) const;  // reduced, with reduced junctions
  static BoundaryPoint parse(const std::string& preperiod,
                             const std::string& period,
                             const GroupModel& model);
};

struct HypParams {
  int64_t n = 2;
  double p = 0.05;
  double q = 0.0;
  BoundaryPoint a;

  double k_of_n() const;  // n^{2+5p}
  void validate() const;  // (2+5p)(1/2-q) > 1+2p strictly
  // midpoint of (0, q_sup) with q_sup = 1/2 - (1+2p)/(2+5p)
  static double q_midpoint(double p);
};

// Vertices lo..hi (inclusive) of the unique geodesic ray from y toward the
// boundary point, free groups only.
std::vector<Element> ray_segment(const GroupModel& model, const Element& y,
                                 const BoundaryPoint& a, int64_t lo,
                                 int64_t hi);

// F(x,k,m): the set underlying the characteristic function of
// union_{d(x,y)<k} ray_y([m, 2m]), keyed by canonical bytes.
std::map<std::string, Element> F_indicator(const GroupModel& model,
                                           const Element& x, int64_t k,
                                           double m, const BoundaryPoint& a);

// H(x,m) = m^{-(3/2-q)} sum_{0<k<sqrt(m)} F(x,k,m). Multiplicities are kept
// as exact integers with the scalar prefactor factored out, so l1 norms are
// an integer sum times the prefactor.
struct HVector {
  double prefactor = 0.0;
  int64_t total = 0;  // sum of multiplicities
  std::map<std::string, std::pair<Element, int64_t>> counts;
  bool degenerate = false;  // empty k-range

  double l1() const { return prefactor * static_cast<double>(total); }
  double l1_distance(const HVector& other) const;
  double support_radius(const GroupModel& model, const Element& x) const;
};

HVector H_vector(const GroupModel& model, const Element& x, double m,
                 double q, const BoundaryPoint& a);

// g(x,n) = sqrt(H(x,k(n)) / ||H(x,k(n))||_1); weights sqrt(count/total).
struct HypUnitVector {
  std::map<std::string, std::pair<Element, double>> weights;
  double support_radius = 0.0;

  double inner(const HypUnitVector& other) const;
  double norm2() const;
};

HypUnitVector g_hyp(const GroupModel& model, const Element& x,
                    const HypParams& params);

// Lemma conditions over every x (and near pair) in B(1, working_radius):
//  (1) ||H(x,k(n))||_1 >= 1,
//  (2) ||H(x,k(n)) - H(y,k(n))||_1 measured for d(x,y) <= ln n and compared
//      against 1/(4 n^{1+2p}),
//  (3) supp(H(x,k(n))) inside B(x, n^{2+6p}), exact enumeration.
VerificationReport verify_hyp_lemma(const GroupModel& model,
                                    const HypParams& params,
                                    int64_t working_radius,
                                    const BallBudget& budget = {});

// Empirical constants for the (C ln n + D)/k(n)^{1/2-q} envelope of the
// condition-(2) differences, least squares over the given n values.
struct HypFitResult {
  double C = 0.0;
  double D = 0.0;
  std::vector<std::pair<int64_t, double>> max_diffs;  // (n, max l1 diff)
};

HypFitResult fit_hyp_condition2(const GroupModel& model,
                                const std::vector<int64_t>& ns, double p,
                                double q, const BoundaryPoint& a,
                                int64_t working_radius,
                                const BallBudget& budget = {});

}  // namespace uecomp
