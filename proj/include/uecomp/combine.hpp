#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>

#include "uecomp/extension.hpp"
#include "uecomp/hypvec.hpp"
#include "uecomp/kernel.hpp"
#include "uecomp/polyvec.hpp"
#include "uecomp/report.hpp"

namespace uecomp {

// Scale bookkeeping for the extension combiner. S_G is the support radius
// actually used for the quotient family; the nominal constructors fill in
// n^{3/2+5p} (polynomial case) or n^{2+6p} (hyperbolic case), and
// with_support substitutes a measured radius while keeping the dependent
// quantities S_H = (n^{1/2+3p} S_G)^{1/(delta-p)} and S_bar = n^p S_H.
struct ExtensionScales {
  int64_t n = 2;
  double p = 0.05;
  double delta = 1.0;
  bool hyperbolic = false;

  double S_G = 0.0;
  double S_H = 0.0;
  double S_bar = 0.0;
  double near_radius = 0.0;  // sqrt(n) polynomial, ln(n) hyperbolic

  static ExtensionScales nominal(int64_t n, double p, double delta,
                                 bool hyperbolic);
  static ExtensionScales with_support(int64_t n, double p, double delta,
                                      bool hyperbolic, double support_radius);
  void validate() const;
};

// Finite-support unit vector in l2 of the quotient, keyed by canonical bytes.
struct SparseUnitVector {
  std::map<std::string, std::pair<Element, double>> weights;
  double support_radius = 0.0;
};

using QuotientFamilyFn = std::function<SparseUnitVector(const Element&)>;

// Adapters for the two quotient-family constructions. The PolyFamily must
// have its support materialized.
QuotientFamilyFn quotient_family_poly(std::shared_ptr<const PolyFamily> g);
QuotientFamilyFn quotient_family_hyp(std::shared_ptr<const GroupModel> model,
                                     const HypParams& params);

// f_n(a)(x) = g_n(pi(a))(x) * h_n(project_to_kernel(sigma(x)^{-1} a)), with
// h_n a unit-vector family over a kernel ball held as a Gram matrix. Values
// are memoized per element. Kernel arguments that fall outside the h ball
// are recorded as out-of-domain, never silently dropped.
class CombinedFamily {
 public:
  CombinedFamily(std::shared_ptr<const ExtensionModel> ext, QuotientFamilyFn g,
                 const ScaleFamily* h, ExtensionScales scales);

  struct Value {
    std::vector<std::string> keys;  // sorted support of g_n(pi(a))
    std::vector<double> g_weight;
    std::vector<std::optional<size_t>> h_index;
    bool out_of_domain = false;
    double norm2 = 0.0;  // sum of g weights squared; h blocks are unit
  };

  const Value& value(const Element& a) const;
  double norm(const Element& a) const;
  // nullopt when an aligned term of either argument is out of the h domain
  std::optional<double> inner(const Element& a, const Element& b) const;
  std::optional<double> distance(const Element& a, const Element& b) const;

  const ExtensionModel& extension() const { return *ext_; }
  const ExtensionScales& scales() const { return scales_; }
  uint64_t out_of_domain_count() const { return out_of_domain_; }

 private:
  std::shared_ptr<const ExtensionModel> ext_;
  QuotientFamilyFn g_;
  const ScaleFamily* h_;
  ExtensionScales scales_;
  mutable std::unordered_map<std::string, Value> cache_;
  mutable uint64_t out_of_domain_ = 0;
};

// Builds the combined family and checks the support precondition
// supp(g_n(x)) inside B(x, S_G) on the quotient image of the given ball,
// rejecting with the offending element on violation.
CombinedFamily combine_family(std::shared_ptr<const ExtensionModel> ext,
                              QuotientFamilyFn g, const ScaleFamily* h,
                              const ExtensionScales& scales,
                              const Ball& gamma_ball);

// Exhaustive pair check over the given ball of the total group:
//   unit_norm        : | ||f_n(a)|| - 1 | <= 1e-12
//   near_inner       : |1 - <f_n(a), f_n(b)>| <= 1/(2 n^{1+2p}) when
//                      d(a,b) <= near radius
//   near_distance    : ||f_n(a) - f_n(b)|| <= 1/n^{1/2+p}, same pairs
//   far_distance     : ||f_n(a) - f_n(b)|| >= 1 when d(a,b) >= 2 S_G + S_H
//   far_distance_sbar: ||f_n(a) - f_n(b)|| >= 1 when d(a,b) >= S_bar
// Vacuous rows are flagged; out-of-domain pairs are counted in the notes.
VerificationReport verify_combined(const CombinedFamily& f,
                                   const Ball& gamma_ball);

// Turnkey construction: enumerates the working ball of the total group,
// collects every kernel argument the combiner will need (with the induced
// kernel length), fits an upper/lower envelope profile of the supplied
// kernel embedding over that set, and builds the h family with the
// tolerance radius 2 S_G + (near radius) and eps_h^2 = 1/(2 n^{1+2p}) so
// the near bullet follows from the quotient lemma plus the Gram formula.
struct CombineBuild {
  std::shared_ptr<const ExtensionModel> ext;
  std::unique_ptr<Ball> gamma_ball;
  std::unique_ptr<Ball> kernel_ball;  // induced kernel lengths as entry.len
  std::unique_ptr<ScaleFamily> h;
  std::unique_ptr<CombinedFamily> f;
  ExtensionScales scales;
  CompressionProfile kernel_profile;
};

CombineBuild build_combined(std::shared_ptr<const ExtensionModel> ext,
                            QuotientFamilyFn g, double support_radius,
                            int64_t n, double p, double delta, bool hyperbolic,
                            const EmbeddingFn& kernel_embed,
                            double gamma_radius, const BallBudget& budget = {});

}  // namespace uecomp
