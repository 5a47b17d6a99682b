#include "uecomp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uecomp {

void CompressionProfile::validate() const {
  if (delta <= 0 || delta > 1)
    throw InvalidSpecError("profile needs delta in (0,1]");
  if (C <= 0 || Ctilde <= 0)
    throw InvalidSpecError("profile needs C, Ctilde > 0");
  if (D < 0 || Dtilde < 0)
    throw InvalidSpecError("profile needs D, Dtilde >= 0");
}

void ScaleParams::validate() const {
  if (n < 1) throw InvalidSpecError("scale params need n >= 1");
  if (a <= 0 || b <= 0 || r <= 0)
    throw InvalidSpecError("scale params need a, b, r > 0");
  double eps = eps_n();
  if (!(eps > 0 && eps < std::sqrt(2.0)))
    throw InvalidSpecError("eps_n must lie in (0, sqrt(2))");
}

double schoenberg_t(double eps, double rho_plus_at_R) {
  if (!(eps > 0 && eps < std::sqrt(2.0)))
    throw InvalidSpecError("schoenberg_t needs eps in (0, sqrt(2))");
  if (rho_plus_at_R <= 0)
    throw InvalidSpecError("schoenberg_t needs rho_+(R) > 0");
  return -std::log1p(-eps * eps / 2.0) / (rho_plus_at_R * rho_plus_at_R);
}

ScaleFamily::ScaleFamily(const Ball* ball, Eigen::MatrixXd gram, double t)
    : ball_(ball), gram_(std::move(gram)), t_(t) {}

ScaleFamily schoenberg_family(const Ball& ball, const EmbeddingFn& embed,
                              double t) {
  if (t <= 0) throw InvalidSpecError("schoenberg family needs t > 0");
  const size_t n = ball.size();
  std::vector<Eigen::VectorXd> coords;
  coords.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Eigen::VectorXd v = embed(ball[i].x);
    if (!v.allFinite())
      throw NumericError("embedding produced non-finite coordinates");
    coords.push_back(std::move(v));
  }
  Eigen::MatrixXd gram(n, n);
  for (size_t i = 0; i < n; ++i) {
    gram(i, i) = 1.0;
    for (size_t j = i + 1; j < n; ++j) {
      double d2 = (coords[i] - coords[j]).squaredNorm();
      double g = std::exp(-t * d2);
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }
  return ScaleFamily(&ball, std::move(gram), t);
}

Eigen::MatrixXd realize_vectors(ScaleFamily& family) {
  const Eigen::MatrixXd& gram = family.gram();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw NumericError("eigendecomposition failed");
  Eigen::VectorXd evals = solver.eigenvalues();
  double worst = evals.minCoeff();
  if (worst < -1e-10)
    throw NumericError("Gram matrix indefinite; worst eigenvalue " +
                       format_double(worst));
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    evals(i) = std::max(0.0, evals(i));
  Eigen::MatrixXd vectors =
      solver.eigenvectors() * evals.cwiseSqrt().asDiagonal();
  family.attach_vectors(vectors);
  return family.vectors();
}

ThresholdResult corollary_threshold(const CompressionProfile& profile,
                                    const ScaleParams& params) {
  profile.validate();
  if (params.p < 0 || params.p >= profile.delta)
    throw InvalidSpecError("corollary threshold needs 0 <= p < delta");
  double n = static_cast<double>(params.n);
  double inner = profile.C * std::sqrt(2.0) * params.a * std::pow(n, params.b) *
                     (profile.Ctilde * std::pow(n, params.r) + profile.Dtilde) +
                 profile.C * profile.D;
  ThresholdResult result;
  result.A_n = std::pow(inner, 1.0 / (profile.delta - params.p));
  result.simplified =
      std::pow(n, (params.r + params.b + params.p) / (profile.delta - params.p));
  result.within_simplified = result.A_n <= result.simplified;
  return result;
}

VerificationReport verify_family(const ScaleFamily& family,
                                 const GroupModel& model, double R_n,
                                 double eps_n, double S) {
  const Ball& ball = family.ball();
  ReportRow near{"near", 0, 0, 0, std::numeric_limits<double>::infinity(),
                 false, ""};
  ReportRow far{"far", 0, 0, 0, std::numeric_limits<double>::infinity(), false,
                ""};
  // floating-point ties within 1e-12 count as satisfied
  constexpr double kTie = 1e-12;
  for (size_t i = 0; i < ball.size(); ++i) {
    for (size_t j = i; j < ball.size(); ++j) {
      double d = model.dist(ball[i].x, ball[j].x);
      double pd = family.pair_distance(i, j);
      if (d <= R_n) {
        ++near.pairs_checked;
        double margin = eps_n - pd;
        near.worst_margin = std::min(near.worst_margin, margin);
        if (margin < -kTie) ++near.violations;
      }
      if (d >= S) {
        ++far.pairs_checked;
        double margin = pd - 1.0;
        far.worst_margin = std::min(far.worst_margin, margin);
        if (margin < -kTie) ++far.violations;
      }
    }
  }
  near.vacuous = near.pairs_checked == 0;
  far.vacuous = far.pairs_checked == 0;
  if (near.vacuous) near.worst_margin = 0.0;
  if (far.vacuous) {
    far.worst_margin = 0.0;
    far.note = "no ball pair reaches distance S";
  }
  VerificationReport report;
  report.rows = {near, far};
  return report;
}

double RhoStep::eval(double d, bool* saturated) const {
  if (saturated) *saturated = false;
  if (d < 0) throw InvalidSpecError("rho_- wants d >= 0");
  // value sqrt(n-1)/2 on [S_{n-1}, S_n); thresholds[i] = S_{i+1}
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), d);
  size_t n = static_cast<size_t>(it - thresholds.begin()) + 1;
  if (it == thresholds.end()) {
    // beyond the truncation: the modeled sum stops here
    if (saturated) *saturated = true;
  }
  return 0.5 * std::sqrt(static_cast<double>(n - 1));
}

StackedEmbedding::StackedEmbedding(std::vector<const ScaleFamily*> families,
                                   size_t basepoint)
    : families_(std::move(families)), basepoint_(basepoint) {}

Eigen::VectorXd StackedEmbedding::operator()(size_t ball_index) const {
  Eigen::Index total = 0;
  for (const ScaleFamily* f : families_) total += f->vectors().cols();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (const ScaleFamily* f : families_) {
    const Eigen::MatrixXd& v = f->vectors();
    out.segment(at, v.cols()) =
        0.5 * (v.row(ball_index) - v.row(basepoint_)).transpose();
    at += v.cols();
  }
  return out;
}

Eigen::VectorXd StackedEmbedding::operator()(const Element& x) const {
  auto idx = families_.front()->ball().find(x);
  if (!idx)
    throw InvalidSpecError("element missing from the stacked-family ball");
  return (*this)(*idx);
}

double StackedEmbedding::tail_constant(int64_t from_n, double p) const {
  double c = 0.0;
  for (int64_t i = from_n; i <= static_cast<int64_t>(families_.size()); ++i)
    c += std::pow(static_cast<double>(i), -(1.0 + 2.0 * p));
  return c / 4.0;
}

StackedEmbedding stacked_embedding(std::vector<const ScaleFamily*> families,
                                   const Element& basepoint) {
  if (families.empty())
    throw InvalidSpecError("stacked embedding needs at least one family");
  const Ball& ball = families.front()->ball();
  for (const ScaleFamily* f : families) {
    if (!f->realized())
      throw InvalidSpecError("stacked embedding needs realized vectors");
    if (&f->ball() != &ball)
      throw InvalidSpecError("stacked families must share one ball");
  }
  auto idx = ball.find(basepoint);
  if (!idx) throw InvalidSpecError("basepoint missing from the family ball");
  return StackedEmbedding(std::move(families), *idx);
}

}  // namespace uecomp
