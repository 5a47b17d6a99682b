#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "uecomp/ball.hpp"
#include "uecomp/report.hpp"

namespace uecomp {

// rho_-(r) = (1/C) r^delta - D, rho_+(r) = Ctilde r + Dtilde
struct CompressionProfile {
  double delta = 1.0;
  double C = 1.0;
  double D = 0.0;
  double Ctilde = 1.0;
  double Dtilde = 0.0;

  double rho_minus(double r) const { return std::pow(r, delta) / C - D; }
  double rho_plus(double r) const { return Ctilde * r + Dtilde; }
  void validate() const;
};

struct ScaleParams {
  int64_t n = 1;
  double p = 0.05;
  double r = 0.5;   // R_n = n^r
  double a = std::sqrt(2.0);
  double b = 0.55;  // eps_n = 1 / (a n^b)

  double R_n() const { return std::pow(static_cast<double>(n), r); }
  double eps_n() const { return 1.0 / (a * std::pow(static_cast<double>(n), b)); }
  void validate() const;
};

// t = -ln(1 - eps^2/2) / rho_plus(R)^2
double schoenberg_t(double eps, double rho_plus_at_R);

using EmbeddingFn = std::function<Eigen::VectorXd(const Element&)>;

// Unit-vector family over a ball, held as its Gram matrix
// Gram[x][y] = exp(-t ||F(x)-F(y)||^2). Realized coordinate vectors are
// attached on demand.
class ScaleFamily {
 public:
  ScaleFamily(const Ball* ball, Eigen::MatrixXd gram, double t);

  const Ball& ball() const { return *ball_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  double t() const { return t_; }

  // ||xi_x - xi_y|| from the Gram entry
  double pair_distance(size_t i, size_t j) const {
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * gram_(i, j)));
  }

  bool realized() const { return vectors_.has_value(); }
  const Eigen::MatrixXd& vectors() const { return *vectors_; }
  void attach_vectors(Eigen::MatrixXd v) { vectors_ = std::move(v); }

 private:
  const Ball* ball_;
  Eigen::MatrixXd gram_;
  double t_;
  std::optional<Eigen::MatrixXd> vectors_;
};

ScaleFamily schoenberg_family(const Ball& ball, const EmbeddingFn& embed,
                              double t);

// Symmetric PSD factorization of the Gram matrix; rows are the realized
// vectors. Eigenvalues below -1e-10 are a NumericError, tiny negatives are
// clipped to zero. The result is also attached to the family.
Eigen::MatrixXd realize_vectors(ScaleFamily& family);

struct ThresholdResult {
  double A_n = 0.0;             // exact formula value
  double simplified = 0.0;      // n^{(r+b+p)/(delta-p)}
  bool within_simplified = false;  // A_n <= simplified at this n
};

// A_n = [C sqrt(2) a n^b (Ctilde n^r + Dtilde) + C D]^{1/(delta-p)}
ThresholdResult corollary_threshold(const CompressionProfile& profile,
                                    const ScaleParams& params);

// Exhaustive pair check of the two unit-vector-family conditions over the
// family's ball: ||xi_x - xi_y|| <= eps_n when d <= R_n, and >= 1 when
// d >= S. Report-based; never throws on violations.
VerificationReport verify_family(const ScaleFamily& family,
                                 const GroupModel& model, double R_n,
                                 double eps_n, double S);

// rho_- = (1/2) sum sqrt(n-1) chi_[S_{n-1}, S_n)
struct RhoStep {
  std::vector<double> thresholds;  // S_1 < S_2 < ... (S_0 = 0 implicit)

  // value at d; saturated set when d lies beyond the last threshold
  double eval(double d, bool* saturated = nullptr) const;
};

// Stacked embedding F(x) = (1/2)((eta_1(x)-eta_1(x0)) + ... ), truncated at
// depth N, built from realized per-scale vector families on a common ball.
class StackedEmbedding {
 public:
  StackedEmbedding(std::vector<const ScaleFamily*> families, size_t basepoint);

  Eigen::VectorXd operator()(size_t ball_index) const;
  Eigen::VectorXd operator()(const Element& x) const;
  size_t depth() const { return families_.size(); }
  // (1/4) sum_{i >= n} i^{-(1+2p)} over the truncated range only
  double tail_constant(int64_t from_n, double p) const;

 private:
  std::vector<const ScaleFamily*> families_;
  size_t basepoint_;
};

StackedEmbedding stacked_embedding(std::vector<const ScaleFamily*> families,
                                   const Element& basepoint);

}  // namespace uecomp
