#include "uecomp/hypvec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uecomp {

namespace {

void require_free(const GroupModel& model) {
  if (model.spec().kind != GroupKind::FreeGroup)
    throw UnsupportedModelError(
        "boundary-ray machinery is implemented for free groups only");
}

}  // namespace

int64_t BoundaryPoint::letter(size_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  return period[(i - preperiod.size()) % period.size()];
}

void BoundaryPoint::validate(int64_t rank) const {
  if (period.empty())
    throw InvalidSpecError("boundary point needs a nonempty period");
  auto check_letter = [rank](int64_t l) {
    if (l == 0 || std::llabs(l) > rank)
      throw InvalidSpecError("boundary letter out of generator range");
  };
  for (int64_t l : preperiod) check_letter(l);
  for (int64_t l : period) check_letter(l);
  // reduced within words and across the junctions, including period wrap
  auto check_pair = [](int64_t u, int64_t v) {
    if (u == -v)
      throw InvalidSpecError("boundary word is not reduced");
  };
  for (size_t i = 0; i + 1 < preperiod.size(); ++i)
    check_pair(preperiod[i], preperiod[i + 1]);
  for (size_t i = 0; i + 1 < period.size(); ++i)
    check_pair(period[i], period[i + 1]);
  if (!preperiod.empty()) check_pair(preperiod.back(), period.front());
  check_pair(period.back(), period.front());
}

BoundaryPoint BoundaryPoint::parse(const std::string& preperiod,
                                   const std::string& period,
                                   const GroupModel& model) {
  require_free(model);
  BoundaryPoint a;
  auto to_letters = [&](const std::string& s) {
    std::vector<int64_t> letters;
    if (s.empty() || s == "1") return letters;
    for (char c : s) {
      if (c >= 'a' && c <= 'z')
        letters.push_back(c - 'a' + 1);
      else if (c >= 'A' && c <= 'Z')
        letters.push_back(-(c - 'A' + 1));
      else
        throw InvalidSpecError(std::string("bad boundary letter: ") + c);
    }
    return letters;
  };
  a.preperiod = to_letters(preperiod);
  a.period = to_letters(period);
  a.validate(model.spec().rank);
  return a;
}

double HypParams::k_of_n() const {
  return std::pow(static_cast<double>(n), 2.0 + 5.0 * p);
}

void HypParams::validate() const {
  if (n < 1) throw InvalidSpecError("hyp params need n >= 1");
  if (p <= 0 || p >= 1) throw InvalidSpecError("hyp params need p in (0,1)");
  if (!((2.0 + 5.0 * p) * (0.5 - q) > 1.0 + 2.0 * p))
    throw InvalidSpecError("hyp params need (2+5p)(1/2-q) > 1+2p strictly");
}

double HypParams::q_midpoint(double p) {
  double q_sup = 0.5 - (1.0 + 2.0 * p) / (2.0 + 5.0 * p);
  if (q_sup <= 0)
    throw InvalidSpecError("no feasible q for this p");
  return q_sup / 2.0;
}

std::vector<Element> ray_segment(const GroupModel& model, const Element& y,
                                 const BoundaryPoint& a, int64_t lo,
                                 int64_t hi) {
  require_free(model);
  a.validate(model.spec().rank);
  if (lo < 0 || hi < lo)
    throw InvalidSpecError("ray segment needs 0 <= lo <= hi");
  // longest common prefix of the reduced word y with the infinite word
  size_t common = 0;
  while (common < y.w.size() && y.w[common] == a.letter(common)) ++common;
  int64_t backtrack = static_cast<int64_t>(y.w.size() - common);
  std::vector<Element> out;
  out.reserve(static_cast<size_t>(hi - lo + 1));
  for (int64_t i = lo; i <= hi; ++i) {
    Element v;
    if (i <= backtrack) {
      v.w.assign(y.w.begin(), y.w.end() - i);
    } else {
      size_t len = common + static_cast<size_t>(i - backtrack);
      v.w.reserve(len);
      for (size_t j = 0; j < len; ++j) v.w.push_back(a.letter(j));
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::map<std::string, Element> F_indicator(const GroupModel& model,
                                           const Element& x, int64_t k,
                                           double m, const BoundaryPoint& a) {
  require_free(model);
  if (k < 1) throw InvalidSpecError("F indicator needs k >= 1");
  if (m <= 0) throw InvalidSpecError("F indicator needs m > 0");
  int64_t lo = static_cast<int64_t>(std::ceil(m));
  int64_t hi = static_cast<int64_t>(std::floor(2.0 * m));
  std::map<std::string, Element> out;
  if (hi < lo) return out;
  // d(x,y) < k, strict
  Ball nbhd = enumerate_ball(model, static_cast<double>(k - 1));
  for (const BallEntry& e : nbhd.entries()) {
    Element y = model.mul(x, e.x);
    for (Element& v : ray_segment(model, y, a, lo, hi))
      out.emplace(canonical_bytes(v), std::move(v));
  }
  return out;
}

HVector H_vector(const GroupModel& model, const Element& x, double m,
                 double q, const BoundaryPoint& a) {
  require_free(model);
  if (m <= 0) throw InvalidSpecError("H vector needs m > 0");
  HVector h;
  h.prefactor = std::pow(m, -(1.5 - q));
  double sqrt_m = std::sqrt(m);
  for (int64_t k = 1; static_cast<double>(k) < sqrt_m; ++k) {
    for (auto& [bytes, elem] : F_indicator(model, x, k, m, a)) {
      auto [it, fresh] = h.counts.try_emplace(bytes, elem, 0);
      ++it->second.second;
      ++h.total;
    }
  }
  h.degenerate = h.counts.empty();
  return h;
}

double HVector::l1_distance(const HVector& other) const {
  // prefactors agree whenever both vectors come from the same scale
  int64_t diff = 0;
  auto it = counts.begin();
  auto jt = other.counts.begin();
  while (it != counts.end() || jt != other.counts.end()) {
    if (jt == other.counts.end() ||
        (it != counts.end() && it->first < jt->first)) {
      diff += it->second.second;
      ++it;
    } else if (it == counts.end() || jt->first < it->first) {
      diff += jt->second.second;
      ++jt;
    } else {
      diff += std::llabs(it->second.second - jt->second.second);
      ++it;
      ++jt;
    }
  }
  return prefactor * static_cast<double>(diff);
}

double HVector::support_radius(const GroupModel& model,
                               const Element& x) const {
  double r = 0.0;
  for (const auto& [bytes, entry] : counts)
    r = std::max(r, model.dist(x, entry.first));
  return r;
}

double HypUnitVector::inner(const HypUnitVector& other) const {
  double s = 0.0;
  auto it = weights.begin();
  auto jt = other.weights.begin();
  while (it != weights.end() && jt != other.weights.end()) {
    if (it->first < jt->first) {
      ++it;
    } else if (jt->first < it->first) {
      ++jt;
    } else {
      s += it->second.second * jt->second.second;
      ++it;
      ++jt;
    }
  }
  return s;
}

double HypUnitVector::norm2() const {
  double s = 0.0;
  for (const auto& [bytes, entry] : weights)
    s += entry.second * entry.second;
  return s;
}

HypUnitVector g_hyp(const GroupModel& model, const Element& x,
                    const HypParams& params) {
  params.validate();
  HVector h = H_vector(model, x, params.k_of_n(), params.q, params.a);
  if (h.total == 0)
    throw NumericError("H vector vanishes; cannot normalize");
  HypUnitVector g;
  double total = static_cast<double>(h.total);
  for (const auto& [bytes, entry] : h.counts) {
    double w = std::sqrt(static_cast<double>(entry.second) / total);
    g.weights.emplace(bytes, std::make_pair(entry.first, w));
    g.support_radius = std::max(g.support_radius, model.dist(x, entry.first));
  }
  return g;
}

VerificationReport verify_hyp_lemma(const GroupModel& model,
                                    const HypParams& params,
                                    int64_t working_radius,
                                    const BallBudget& budget) {
  params.validate();
  double m = params.k_of_n();
  double n = static_cast<double>(params.n);
  double near_radius = std::log(n);
  double near_bound = 1.0 / (4.0 * std::pow(n, 1.0 + 2.0 * params.p));
  double support_bound = std::pow(n, 2.0 + 6.0 * params.p);
  constexpr double kTie = 1e-12;

  Ball working = enumerate_ball(model, static_cast<double>(working_radius),
                                budget);
  std::vector<HVector> hs;
  hs.reserve(working.size());
  for (const BallEntry& e : working.entries())
    hs.push_back(H_vector(model, e.x, m, params.q, params.a));

  ReportRow norm{"l1_norm_at_least_1", params.n, 0, 0,
                 std::numeric_limits<double>::infinity(), false, ""};
  ReportRow support{"support_containment", params.n, 0, 0,
                    std::numeric_limits<double>::infinity(), false, ""};
  for (size_t i = 0; i < working.size(); ++i) {
    ++norm.pairs_checked;
    double margin = hs[i].l1() - 1.0;
    norm.worst_margin = std::min(norm.worst_margin, margin);
    if (margin < -kTie) ++norm.violations;

    ++support.pairs_checked;
    double r = hs[i].support_radius(model, working[i].x);
    double s_margin = support_bound - r;
    support.worst_margin = std::min(support.worst_margin, s_margin);
    if (s_margin < -kTie) ++support.violations;
  }
  if (support.violations > 0)
    support.note = "supp(H) leaves B(x,n^{2+6p}); the lemma only claims n >= n0";

  ReportRow diff{"l1_difference_near", params.n, 0, 0,
                 std::numeric_limits<double>::infinity(), false, ""};
  double max_diff = 0.0;
  for (size_t i = 0; i < working.size(); ++i) {
    for (size_t j = i; j < working.size(); ++j) {
      if (model.dist(working[i].x, working[j].x) > near_radius) continue;
      ++diff.pairs_checked;
      double d = hs[i].l1_distance(hs[j]);
      max_diff = std::max(max_diff, d);
      double margin = near_bound - d;
      diff.worst_margin = std::min(diff.worst_margin, margin);
      if (margin < -kTie) ++diff.violations;
    }
  }
  diff.note = "max_l1_diff=" + format_double(max_diff);
  if (diff.violations > 0)
    diff.note += "; bound 1/(4n^{1+2p}) holds only for n >= some n0";

  VerificationReport report;
  report.rows = {norm, diff, support};
  return report;
}

HypFitResult fit_hyp_condition2(const GroupModel& model,
                                const std::vector<int64_t>& ns, double p,
                                double q, const BoundaryPoint& a,
                                int64_t working_radius,
                                const BallBudget& budget) {
  HypFitResult fit;
  Ball working = enumerate_ball(model, static_cast<double>(working_radius),
                                budget);
  for (int64_t n : ns) {
    HypParams params{n, p, q, a};
    params.validate();
    double m = params.k_of_n();
    double near_radius = std::log(static_cast<double>(n));
    std::vector<HVector> hs;
    hs.reserve(working.size());
    for (const BallEntry& e : working.entries())
      hs.push_back(H_vector(model, e.x, m, q, a));
    double max_diff = 0.0;
    for (size_t i = 0; i < working.size(); ++i)
      for (size_t j = i + 1; j < working.size(); ++j)
        if (model.dist(working[i].x, working[j].x) <= near_radius)
          max_diff = std::max(max_diff, hs[i].l1_distance(hs[j]));
    fit.max_diffs.emplace_back(n, max_diff);
  }
  // least squares of max_diff * k(n)^{1/2-q} against (ln n, 1)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t mcount = fit.max_diffs.size();
  for (auto& [n, d] : fit.max_diffs) {
    double x = std::log(static_cast<double>(n));
    double y = d * std::pow(std::pow(static_cast<double>(n), 2.0 + 5.0 * p),
                            0.5 - q);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = mcount * sxx - sx * sx;
  if (mcount >= 2 && std::abs(denom) > 1e-12) {
    fit.C = (mcount * sxy - sx * sy) / denom;
    fit.D = (sy - fit.C * sx) / mcount;
  } else if (mcount == 1) {
    fit.D = sy;
  }
  return fit;
}

}  // namespace uecomp
