#include "uecomp/combine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uecomp {

namespace {

ExtensionScales fill_scales(int64_t n, double p, double delta, bool hyperbolic,
                            double S_G) {
  ExtensionScales s;
  s.n = n;
  s.p = p;
  s.delta = delta;
  s.hyperbolic = hyperbolic;
  s.S_G = S_G;
  double nn = static_cast<double>(n);
  s.S_H = std::pow(std::pow(nn, 0.5 + 3.0 * p) * S_G, 1.0 / (delta - p));
  s.S_bar = std::pow(nn, p) * s.S_H;
  s.near_radius = hyperbolic ? std::log(nn) : std::sqrt(nn);
  s.validate();
  return s;
}

}  // namespace

ExtensionScales ExtensionScales::nominal(int64_t n, double p, double delta,
                                         bool hyperbolic) {
  double nn = static_cast<double>(n);
  double S_G = hyperbolic ? std::pow(nn, 2.0 + 6.0 * p)
                          : std::pow(nn, 1.5 + 5.0 * p);
  return fill_scales(n, p, delta, hyperbolic, S_G);
}

ExtensionScales ExtensionScales::with_support(int64_t n, double p, double delta,
                                              bool hyperbolic,
                                              double support_radius) {
  return fill_scales(n, p, delta, hyperbolic, support_radius);
}

void ExtensionScales::validate() const {
  if (n < 2) throw InvalidSpecError("extension scales need n >= 2");
  if (!(p > 0)) throw InvalidSpecError("extension scales need p > 0");
  if (!(delta > p && delta <= 1))
    throw InvalidSpecError("extension scales need p < delta <= 1");
  if (!(S_G > 0 && S_H > 0 && S_bar > 0 && near_radius > 0))
    throw InvalidSpecError("extension scales must all be positive");
  if (!(S_bar > S_H))
    throw InvalidSpecError("extension scales need S_bar > S_H");
}

QuotientFamilyFn quotient_family_poly(std::shared_ptr<const PolyFamily> g) {
  // force a clear error now rather than at first use
  g->support(g->model().identity());
  return [g](const Element& x) {
    SparseUnitVector v;
    double w = g->weight();
    for (const Element& s : g->support(x))
      v.weights.emplace(canonical_bytes(s), std::make_pair(s, w));
    v.support_radius = g->support_radius();
    return v;
  };
}

QuotientFamilyFn quotient_family_hyp(std::shared_ptr<const GroupModel> model,
                                     const HypParams& params) {
  params.validate();
  return [model, params](const Element& x) {
    HypUnitVector u = g_hyp(*model, x, params);
    SparseUnitVector v;
    v.weights = std::move(u.weights);
    v.support_radius = u.support_radius;
    return v;
  };
}

CombinedFamily::CombinedFamily(std::shared_ptr<const ExtensionModel> ext,
                               QuotientFamilyFn g, const ScaleFamily* h,
                               ExtensionScales scales)
    : ext_(std::move(ext)), g_(std::move(g)), h_(h), scales_(scales) {
  scales_.validate();
  if (!h_) throw InvalidSpecError("combined family needs a kernel family");
}

const CombinedFamily::Value& CombinedFamily::value(const Element& a) const {
  std::string key = canonical_bytes(a);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const GroupModel& total = ext_->total();
  const GroupModel& quotient = ext_->quotient();
  Element pi_a = ext_->project(a);
  SparseUnitVector g = g_(pi_a);

  Value v;
  v.keys.reserve(g.weights.size());
  for (const auto& [xkey, entry] : g.weights) {
    const Element& x = entry.first;
    double dq = quotient.dist(pi_a, x);
    if (dq > scales_.S_G + 1e-9)
      throw InvalidSpecError("quotient support escapes B(x, S_G) at " +
                             quotient.format(x));
    Element arg = ext_->project_to_kernel(
        total.mul(total.inv(ext_->section(x)), a));
    std::optional<size_t> idx = h_->ball().find(arg);
    if (!idx) {
      v.out_of_domain = true;
      ++out_of_domain_;
    }
    v.keys.push_back(xkey);
    v.g_weight.push_back(entry.second);
    v.h_index.push_back(idx);
    v.norm2 += entry.second * entry.second;
  }
  return cache_.emplace(std::move(key), std::move(v)).first->second;
}

double CombinedFamily::norm(const Element& a) const {
  return std::sqrt(value(a).norm2);
}

std::optional<double> CombinedFamily::inner(const Element& a,
                                            const Element& b) const {
  const Value& va = value(a);
  const Value& vb = value(b);
  double sum = 0.0;
  size_t i = 0, j = 0;
  while (i < va.keys.size() && j < vb.keys.size()) {
    int cmp = va.keys[i].compare(vb.keys[j]);
    if (cmp < 0) {
      ++i;
    } else if (cmp > 0) {
      ++j;
    } else {
      if (!va.h_index[i] || !vb.h_index[j]) return std::nullopt;
      sum += va.g_weight[i] * vb.g_weight[j] *
             h_->gram()(static_cast<Eigen::Index>(*va.h_index[i]),
                        static_cast<Eigen::Index>(*vb.h_index[j]));
      ++i;
      ++j;
    }
  }
  return sum;
}

std::optional<double> CombinedFamily::distance(const Element& a,
                                               const Element& b) const {
  std::optional<double> ip = inner(a, b);
  if (!ip) return std::nullopt;
  return std::sqrt(std::max(0.0, value(a).norm2 + value(b).norm2 - 2.0 * *ip));
}

CombinedFamily combine_family(std::shared_ptr<const ExtensionModel> ext,
                              QuotientFamilyFn g, const ScaleFamily* h,
                              const ExtensionScales& scales,
                              const Ball& gamma_ball) {
  CombinedFamily f(std::move(ext), std::move(g), h, scales);
  // value() enforces the support precondition element by element
  for (const BallEntry& e : gamma_ball.entries()) f.value(e.x);
  return f;
}

VerificationReport verify_combined(const CombinedFamily& f,
                                   const Ball& gamma_ball) {
  const ExtensionScales& sc = f.scales();
  const GroupModel& total = f.extension().total();
  double nn = static_cast<double>(sc.n);
  double near_inner_tol = 1.0 / (2.0 * std::pow(nn, 1.0 + 2.0 * sc.p));
  double near_dist_tol = 1.0 / std::pow(nn, 0.5 + sc.p);
  double far_threshold = 2.0 * sc.S_G + sc.S_H;
  constexpr double kTie = 1e-12;
  constexpr double inf = std::numeric_limits<double>::infinity();

  ReportRow unit{"unit_norm", sc.n, 0, 0, inf, false, ""};
  ReportRow near_ip{"near_inner", sc.n, 0, 0, inf, false, ""};
  ReportRow near_d{"near_distance", sc.n, 0, 0, inf, false, ""};
  ReportRow far_d{"far_distance", sc.n, 0, 0, inf, false, ""};
  ReportRow far_sbar{"far_distance_sbar", sc.n, 0, 0, inf, false, ""};
  uint64_t skipped = 0;

  for (size_t i = 0; i < gamma_ball.size(); ++i) {
    ++unit.pairs_checked;
    double margin = 1e-12 - std::abs(f.norm(gamma_ball[i].x) - 1.0);
    unit.worst_margin = std::min(unit.worst_margin, margin);
    if (margin < -kTie) ++unit.violations;
  }

  for (size_t i = 0; i < gamma_ball.size(); ++i) {
    for (size_t j = i; j < gamma_ball.size(); ++j) {
      double d = total.dist(gamma_ball[i].x, gamma_ball[j].x);
      bool is_near = d <= sc.near_radius;
      bool is_far = d >= far_threshold;
      bool is_far_sbar = d >= sc.S_bar;
      if (!is_near && !is_far && !is_far_sbar) continue;
      std::optional<double> ip = f.inner(gamma_ball[i].x, gamma_ball[j].x);
      if (!ip) {
        ++skipped;
        continue;
      }
      std::optional<double> pd = f.distance(gamma_ball[i].x, gamma_ball[j].x);
      if (is_near) {
        ++near_ip.pairs_checked;
        double m = near_inner_tol - std::abs(1.0 - *ip);
        near_ip.worst_margin = std::min(near_ip.worst_margin, m);
        if (m < -kTie) ++near_ip.violations;

        ++near_d.pairs_checked;
        double m2 = near_dist_tol - *pd;
        near_d.worst_margin = std::min(near_d.worst_margin, m2);
        if (m2 < -kTie) ++near_d.violations;
      }
      if (is_far) {
        ++far_d.pairs_checked;
        double m = *pd - 1.0;
        far_d.worst_margin = std::min(far_d.worst_margin, m);
        if (m < -kTie) ++far_d.violations;
      }
      if (is_far_sbar) {
        ++far_sbar.pairs_checked;
        double m = *pd - 1.0;
        far_sbar.worst_margin = std::min(far_sbar.worst_margin, m);
        if (m < -kTie) ++far_sbar.violations;
      }
    }
  }

  for (ReportRow* row : {&unit, &near_ip, &near_d, &far_d, &far_sbar}) {
    row->vacuous = row->pairs_checked == 0;
    if (row->vacuous) row->worst_margin = 0.0;
    if (skipped > 0) {
      std::ostringstream os;
      os << "out_of_domain_pairs=" << skipped;
      row->note = os.str();
    }
  }
  if (far_d.vacuous && gamma_ball.radius() < far_threshold) {
    far_d.note += (far_d.note.empty() ? "" : "; ");
    far_d.note += "ball radius below 2*S_G + S_H";
  }
  if (far_sbar.vacuous && gamma_ball.radius() < sc.S_bar) {
    far_sbar.note += (far_sbar.note.empty() ? "" : "; ");
    far_sbar.note += "ball radius below S_bar";
  }

  VerificationReport report;
  report.rows = {unit, near_ip, near_d, far_d, far_sbar};
  return report;
}

CombineBuild build_combined(std::shared_ptr<const ExtensionModel> ext,
                            QuotientFamilyFn g, double support_radius,
                            int64_t n, double p, double delta, bool hyperbolic,
                            const EmbeddingFn& kernel_embed,
                            double gamma_radius, const BallBudget& budget) {
  CombineBuild out;
  out.ext = ext;
  out.scales = ExtensionScales::with_support(n, p, delta, hyperbolic,
                                             support_radius);
  out.gamma_ball = std::make_unique<Ball>(
      enumerate_ball(ext->total(), gamma_radius, budget));

  // every h argument the combiner can touch, with the induced kernel length
  const GroupModel& total = ext->total();
  std::map<std::string, Element> args;
  for (const BallEntry& e : out.gamma_ball->entries()) {
    Element pi_a = ext->project(e.x);
    SparseUnitVector gx = g(pi_a);
    for (const auto& [key, entry] : gx.weights) {
      (void)key;
      Element arg = ext->project_to_kernel(
          total.mul(total.inv(ext->section(entry.first)), e.x));
      args.emplace(canonical_bytes(arg), std::move(arg));
    }
  }
  std::vector<BallEntry> kentries;
  kentries.reserve(args.size());
  double max_len = 0.0;
  for (auto& [key, x] : args) {
    (void)key;
    double len = ext->kernel_induced_length(x);
    max_len = std::max(max_len, len);
    kentries.push_back(BallEntry{std::move(x), len});
  }
  std::sort(kentries.begin(), kentries.end(),
            [](const BallEntry& a, const BallEntry& b) {
              if (a.len != b.len) return a.len < b.len;
              return canonical_bytes(a.x) < canonical_bytes(b.x);
            });
  out.kernel_ball = std::make_unique<Ball>(ext->kernel().spec(), max_len,
                                           std::move(kentries));

  // envelope profile of the embedding over the collected set, additive
  // constants pinned to 1
  std::vector<Eigen::VectorXd> coords;
  coords.reserve(out.kernel_ball->size());
  for (const BallEntry& e : out.kernel_ball->entries())
    coords.push_back(kernel_embed(e.x));
  CompressionProfile prof;
  prof.delta = delta;
  prof.D = 1.0;
  prof.Dtilde = 1.0;
  double C = 1.0, Ctilde = 1e-9;
  for (size_t i = 0; i < coords.size(); ++i) {
    for (size_t j = i + 1; j < coords.size(); ++j) {
      double dist = ext->kernel_induced_length(ext->kernel_part(total.mul(
          total.inv(ext->embed_kernel((*out.kernel_ball)[i].x)),
          ext->embed_kernel((*out.kernel_ball)[j].x))));
      double df = (coords[i] - coords[j]).norm();
      if (dist > 0) Ctilde = std::max(Ctilde, std::max(0.0, df - 1.0) / dist);
      C = std::max(C, std::pow(dist, delta) / (df + 1.0));
    }
  }
  prof.C = C;
  prof.Ctilde = Ctilde;
  out.kernel_profile = prof;

  double nn = static_cast<double>(n);
  double eps_h = std::sqrt(1.0 / (2.0 * std::pow(nn, 1.0 + 2.0 * p)));
  double R_H = 2.0 * out.scales.S_G + out.scales.near_radius;
  double t = schoenberg_t(eps_h, prof.rho_plus(R_H));
  out.h = std::make_unique<ScaleFamily>(
      schoenberg_family(*out.kernel_ball, kernel_embed, t));
  out.f = std::make_unique<CombinedFamily>(
      combine_family(ext, std::move(g), out.h.get(), out.scales,
                     *out.gamma_ball));
  return out;
}

}  // namespace uecomp
