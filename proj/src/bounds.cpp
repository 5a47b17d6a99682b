#include "uecomp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "uecomp/report.hpp"

namespace uecomp {

double PowerRule::eval(double i) const { return coeff * std::pow(i, exponent); }

void LimitSystem::validate() const {
  if (!(delta > 0 && delta <= 1))
    throw InvalidSpecError("limit system needs delta in (0,1]");
  if (C.coeff <= 0 || Ctilde.coeff <= 0)
    throw InvalidSpecError("limit system needs positive C and Ctilde rules");
  if (D.coeff < 0 || Dtilde.coeff < 0)
    throw InvalidSpecError("limit system needs nonnegative D and Dtilde rules");
  if (g.coeff <= 0 || g.exponent < 0)
    throw InvalidSpecError("limit system needs a nondecreasing positive g");
}

namespace {

// K n^E (ln n)^L
struct Monomial {
  double K = 0.0;
  double E = 0.0;
  double L = 0.0;
};

// rule applied to g(n) ~ g.coeff n^{g.exponent}
Monomial composed(const PowerRule& rule, const PowerRule& g) {
  Monomial m;
  m.K = rule.coeff * std::pow(g.coeff, rule.exponent);
  m.E = rule.exponent * g.exponent;
  return m;
}

Monomial dominant(const std::vector<Monomial>& terms) {
  std::map<std::pair<double, double>, double> grouped;
  for (const Monomial& t : terms)
    if (t.K > 0) grouped[{t.E, t.L}] += t.K;
  if (grouped.empty()) throw InvalidSpecError("empty denominator");
  auto it = std::prev(grouped.end());
  return Monomial{it->second, it->first.first, it->first.second};
}

}  // namespace

BoundReport limit_bound(const LimitSystem& sys, int64_t n_max,
                        LimitVariant variant) {
  sys.validate();
  if (n_max < 10) throw InvalidSpecError("limit bound needs nMax >= 10");

  const double root = std::sqrt(2.0 * std::log(2.0));
  const bool quasi = variant == LimitVariant::QuasiGeodesic;

  BoundReport report;
  report.formula = quasi ? "limit_bound_quasi_geodesic" : "limit_bound";
  double best = 0.0;
  for (int64_t n = 2; n <= n_max; ++n) {
    double nn = static_cast<double>(n);
    double i = std::max(1.0, std::ceil(sys.g.eval(nn)));
    double s = quasi ? std::log(nn) : std::sqrt(nn);
    double arg = sys.C.eval(i) * root * std::sqrt(nn) *
                     (sys.Ctilde.eval(i) * s + sys.Dtilde.eval(i)) +
                 sys.C.eval(i) * sys.D.eval(i);
    if (arg <= 1.0) continue;
    double q = 0.5 * sys.delta * std::log(nn - 1.0) / std::log(arg);
    best = std::max(best, q);
  }
  report.numeric_proxy = best;

  // leading monomial of the denominator argument
  Monomial mc = composed(sys.C, sys.g);
  Monomial mct = composed(sys.Ctilde, sys.g);
  Monomial mdt = composed(sys.Dtilde, sys.g);
  Monomial md = composed(sys.D, sys.g);
  std::vector<Monomial> terms;
  terms.push_back({mc.K * root * mct.K,
                   mc.E + 0.5 + mct.E + (quasi ? 0.0 : 0.5),
                   quasi ? 1.0 : 0.0});
  terms.push_back({mc.K * root * mdt.K, mc.E + 0.5 + mdt.E, 0.0});
  terms.push_back({mc.K * md.K, mc.E + md.E, 0.0});
  Monomial lead = dominant(terms);

  double ln_nmax = std::log(static_cast<double>(n_max));
  double denom_at_nmax = lead.E * ln_nmax + lead.L * std::log(ln_nmax) +
                         std::log(lead.K);
  if (denom_at_nmax > 0) {
    double v = 0.5 * sys.delta *
               std::log(static_cast<double>(n_max) - 1.0) / denom_at_nmax;
    report.symbolic_at_nmax = std::clamp(v, 0.0, 1.0);
  }
  if (lead.E > 0) {
    double v = 0.5 * sys.delta / lead.E;
    if (v > 1.0) {
      report.caveats.push_back("symbolic limit exceeds 1; clamped");
      v = 1.0;
    }
    report.symbolic_limit = v;
  } else {
    report.symbolic_limit = 1.0;
    report.caveats.push_back(
        "denominator grows slower than any power of n; limit clamped to 1");
  }
  report.caveats.push_back(
      "limsup approximated by a running maximum over n in [2, nMax]");
  report.caveats.push_back(
      "symbolic limit drops the ln ln n correction; compare symbolic_at_nmax "
      "at finite nMax");

  report.value = std::clamp(best, 0.0, 1.0);
  std::ostringstream os;
  os << "delta=" << format_double(sys.delta) << " nMax=" << n_max
     << " variant=" << (quasi ? "quasi-geodesic" : "standard");
  report.trace = os.str();
  return report;
}

double extension_bound_poly_finite(double delta, double p) {
  if (!(delta > 0 && delta <= 1))
    throw InvalidSpecError("extension bound needs delta in (0,1]");
  if (!(p >= 0 && p < delta))
    throw InvalidSpecError("extension bound needs 0 <= p < delta");
  return 1.0 / (2.0 * ((2.0 + 8.0 * p) / (delta - p) + p));
}

double extension_bound_hyp_finite(double delta, double p) {
  if (!(delta > 0 && delta <= 1))
    throw InvalidSpecError("extension bound needs delta in (0,1]");
  if (!(p >= 0 && p < delta))
    throw InvalidSpecError("extension bound needs 0 <= p < delta");
  return 1.0 / (2.0 * ((2.5 + 9.0 * p) / (delta - p) + p));
}

namespace {

BoundReport extension_report(const std::string& formula, double delta,
                             double value) {
  BoundReport report;
  report.formula = formula;
  report.value = value;
  report.numeric_proxy = value;
  report.symbolic_limit = value;
  std::ostringstream os;
  os << "delta=" << format_double(delta) << " p->0";
  report.trace = os.str();
  return report;
}

}  // namespace

BoundReport extension_bound_poly(double delta) {
  return extension_report("extension_bound_poly", delta,
                          extension_bound_poly_finite(delta, 0.0));
}

BoundReport extension_bound_hyp(double delta) {
  return extension_report("extension_bound_hyp", delta,
                          extension_bound_hyp_finite(delta, 0.0));
}

BoundReport wreath_bound(double alpha, int64_t d) {
  if (!(alpha > 0 && alpha <= 1))
    throw InvalidSpecError("wreath bound needs alpha in (0,1]");
  if (d < 0) throw InvalidSpecError("wreath bound needs d >= 0");
  BoundReport report;
  report.formula = "wreath_bound";
  report.value = 2.0 * alpha / (static_cast<double>(d) + 4.0);
  report.numeric_proxy = report.value;
  report.symbolic_limit = report.value;
  std::ostringstream os;
  os << "alpha=" << format_double(alpha) << " d=" << d;
  report.trace = os.str();
  return report;
}

CompressionEstimate empirical_compression(
    const std::vector<std::pair<double, double>>& pairs, double d_min) {
  std::map<int, std::pair<double, double>> bins;  // exponent -> (d, min |dF|)
  size_t used = 0;
  for (const auto& [d, v] : pairs) {
    if (d < d_min || d <= 0) continue;
    ++used;
    int b = static_cast<int>(std::floor(std::log2(d)));
    auto it = bins.find(b);
    if (it == bins.end() || v < it->second.second) bins[b] = {d, v};
  }
  if (used < 50)
    throw InvalidSpecError("empirical compression needs at least 50 pairs "
                           "with d >= dMin");

  CompressionEstimate est;
  est.pairs_used = used;
  std::vector<std::pair<double, double>> pts;  // (log d, log v)
  for (const auto& [b, dv] : bins) {
    (void)b;
    if (dv.second <= 0) {
      est.degenerate = true;
      continue;
    }
    pts.push_back({std::log(dv.first), std::log(dv.second)});
  }
  est.bins = pts.size();
  if (pts.size() < 2) {
    est.degenerate = true;
    est.residual = std::numeric_limits<double>::infinity();
    return est;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double m = static_cast<double>(pts.size());
  double det = m * sxx - sx * sx;
  if (det <= 0) {
    est.degenerate = true;
    est.residual = std::numeric_limits<double>::infinity();
    return est;
  }
  est.exponent = (m * sxy - sx * sy) / det;
  est.intercept = (sy - est.exponent * sx) / m;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    double r = y - (est.exponent * x + est.intercept);
    ss += r * r;
  }
  est.residual = std::sqrt(ss / m);
  if (est.residual > 0.5) est.degenerate = true;
  return est;
}

std::string bound_to_text(const BoundReport& report) {
  std::ostringstream os;
  os << report.formula << ": " << format_double(report.value) << "\n";
  os << "  numeric_proxy: " << format_double(report.numeric_proxy) << "\n";
  if (report.symbolic_limit)
    os << "  symbolic_limit: " << format_double(*report.symbolic_limit) << "\n";
  if (report.symbolic_at_nmax)
    os << "  symbolic_at_nmax: " << format_double(*report.symbolic_at_nmax)
       << "\n";
  os << "  trace: " << report.trace << "\n";
  for (const std::string& c : report.caveats) os << "  caveat: " << c << "\n";
  return os.str();
}

}  // namespace uecomp
