#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uecomp/errors.hpp"

namespace uecomp {

// coeff * i^exponent; exponent 0 gives a constant sequence
struct PowerRule {
  double coeff = 1.0;
  double exponent = 0.0;

  double eval(double i) const;
};

enum class LimitVariant { Standard, QuasiGeodesic };

// Directed system data: per-index embedding constants as closed-form rules
// of the index, and g(n) mapping a scan scale to the index that contains
// every element of length <= sqrt(n) (<= ln n in the quasi-geodesic variant).
struct LimitSystem {
  double delta = 1.0;
  PowerRule C{1.0, 0.0};
  PowerRule Ctilde{1.0, 0.0};
  PowerRule D{0.0, 0.0};
  PowerRule Dtilde{0.0, 0.0};
  PowerRule g{1.0, 0.0};  // g(n), rounded up to an integer >= 1

  void validate() const;
};

struct BoundReport {
  std::string formula;  // stable identifier
  double value = 0.0;   // headline number, clamped to [0, 1]
  double numeric_proxy = 0.0;
  std::optional<double> symbolic_limit;
  std::optional<double> symbolic_at_nmax;
  std::string trace;  // parameter range scanned, p used
  std::vector<std::string> caveats;
};

// Finite-range limsup proxy of the quotient
//   (delta/2) ln(n-1) / ln(C_{g(n)} sqrt(2 ln2 n)(Ctilde_{g(n)} s(n)
//                          + Dtilde_{g(n)}) + C_{g(n)} D_{g(n)})
// with s(n) = sqrt(n) (standard) or ln n (quasi-geodesic), scanned over
// n in [2, nMax]. The symbolic limit comes from degree arithmetic on the
// power rules; symbolic_at_nmax keeps the ln ln n correction, which the
// pure limit drops, so it is the right comparison point at finite nMax.
BoundReport limit_bound(const LimitSystem& sys, int64_t n_max,
                        LimitVariant variant);

// p -> 0 limits of the two extension lower bounds, with the finite-p forms
// [2((2+8p)/(delta-p) + p)]^{-1} and [2((5/2+9p)/(delta-p) + p)]^{-1}.
BoundReport extension_bound_poly(double delta);
BoundReport extension_bound_hyp(double delta);
double extension_bound_poly_finite(double delta, double p);
double extension_bound_hyp_finite(double delta, double p);

// 2 alpha / (d + 4)
BoundReport wreath_bound(double alpha, int64_t d);

struct CompressionEstimate {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms residual of the envelope fit
  size_t bins = 0;
  size_t pairs_used = 0;
  bool degenerate = false;  // flagged when the envelope is flat or noisy
};

// Lower-envelope slope of log||dF|| against log d: pairs are binned into
// dyadic d-bins, the per-bin minimum is kept, and the fit is least squares
// on the bin minima. Needs at least 50 pairs with d >= d_min.
CompressionEstimate empirical_compression(
    const std::vector<std::pair<double, double>>& pairs, double d_min);

std::string bound_to_text(const BoundReport& report);

}  // namespace uecomp
