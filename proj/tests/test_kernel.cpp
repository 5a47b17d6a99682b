#include <doctest.h>

#include <cmath>

#include "uecomp/kernel.hpp"

using namespace uecomp;

namespace {

EmbeddingFn identity_embed() {
  return [](const Element& x) {
    Eigen::VectorXd v(x.w.size());
    for (size_t i = 0; i < x.w.size(); ++i)
      v(static_cast<Eigen::Index>(i)) = static_cast<double>(x.w[i]);
    return v;
  };
}

}  // namespace

TEST_CASE("schoenberg t formula") {
  // t = -ln(1 - eps^2/2) / rho_+(R)^2
  double t = schoenberg_t(0.1, 6.0);
  CHECK(t == doctest::Approx(-std::log(1.0 - 0.005) / 36.0).epsilon(1e-14));
  CHECK_THROWS_AS(schoenberg_t(0.0, 1.0), InvalidSpecError);
  CHECK_THROWS_AS(schoenberg_t(1.5, 0.0), InvalidSpecError);
}

TEST_CASE("gram entries follow the kernel formula on Z") {
  auto model = make_group("Z");
  Ball ball = enumerate_ball(*model, 4);
  double t = 0.01;
  ScaleFamily family = schoenberg_family(ball, identity_embed(), t);
  for (size_t i = 0; i < ball.size(); ++i) {
    for (size_t j = 0; j < ball.size(); ++j) {
      double d = model->dist(ball[i].x, ball[j].x);
      CHECK(family.gram()(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(j)) ==
            doctest::Approx(std::exp(-t * d * d)).epsilon(1e-14));
    }
  }
}

TEST_CASE("realized vectors reproduce the gram matrix with unit norms") {
  auto model = make_group("Z^2");
  Ball ball = enumerate_ball(*model, 4);
  ScaleFamily family =
      schoenberg_family(ball, identity_embed(), schoenberg_t(0.1, 4.0));
  Eigen::MatrixXd v = realize_vectors(family);
  Eigen::MatrixXd recon = v * v.transpose();
  double max_err = (recon - family.gram()).cwiseAbs().maxCoeff();
  CHECK(max_err <= 1e-9);
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    CHECK(std::abs(v.row(i).norm() - 1.0) <= 1e-9);
}

TEST_CASE("pair distances saturate the near condition") {
  auto model = make_group("Z");
  Ball ball = enumerate_ball(*model, 6);
  double eps = 0.1;
  ScaleFamily family =
      schoenberg_family(ball, identity_embed(), schoenberg_t(eps, 6.0));
  VerificationReport report =
      verify_family(family, *model, 6.0, eps, 1e18);
  const ReportRow* near = report.row("near");
  REQUIRE(near != nullptr);
  CHECK(near->violations == 0);
  CHECK_FALSE(near->vacuous);
  // diameter pairs hit ||xi - xi'|| = eps exactly
  CHECK(near->worst_margin == doctest::Approx(0.0).epsilon(1e-9));
  const ReportRow* far = report.row("far");
  REQUIRE(far != nullptr);
  CHECK(far->vacuous);
}

TEST_CASE("corollary threshold formula") {
  CompressionProfile profile;  // delta=1, C=Ctilde=1, D=Dtilde=0
  ScaleParams params;
  params.n = 16;
  params.p = 0.0;
  params.a = std::sqrt(2.0);
  params.b = 0.55;
  params.r = 0.5;
  ThresholdResult res = corollary_threshold(profile, params);
  // A_n = [sqrt2 * sqrt2 * n^0.55 * n^0.5]^{1/1} = 2 n^{1.05}
  CHECK(res.A_n == doctest::Approx(2.0 * std::pow(16.0, 1.05)).epsilon(1e-12));
  CHECK(res.simplified ==
        doctest::Approx(std::pow(16.0, 1.05)).epsilon(1e-12));
  CHECK_FALSE(res.within_simplified);  // constants push A_n above n^{1.05}
  ScaleParams small = params;
  small.p = 0.05;
  ThresholdResult res2 = corollary_threshold(profile, small);
  CHECK(res2.A_n ==
        doctest::Approx(std::pow(2.0 * std::pow(16.0, 1.05), 1.0 / 0.95))
            .epsilon(1e-12));
  CompressionProfile bad;
  bad.delta = 0.0;
  CHECK_THROWS_AS(corollary_threshold(bad, params), InvalidSpecError);
}

TEST_CASE("step rho lower bound") {
  RhoStep rho;
  rho.thresholds = {2.0, 5.0, 11.0};
  bool saturated = false;
  CHECK(rho.eval(0.0, &saturated) == 0.0);  // n=1: sqrt(0)/2
  CHECK_FALSE(saturated);
  CHECK(rho.eval(3.0) == doctest::Approx(0.5 * std::sqrt(1.0)));
  CHECK(rho.eval(7.0) == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(rho.eval(100.0, &saturated) == doctest::Approx(0.5 * std::sqrt(3.0)));
  CHECK(saturated);
  CHECK_THROWS_AS(rho.eval(-1.0), InvalidSpecError);
}

TEST_CASE("stacked embedding: exact pair identity and far lower bound") {
  auto model = make_group("Z");
  Ball ball = enumerate_ball(*model, 8);
  std::vector<ScaleFamily> families;
  std::vector<double> eps = {0.9, 0.7, 0.5};
  for (double e : eps) {
    families.push_back(
        schoenberg_family(ball, identity_embed(), schoenberg_t(e, 2.0)));
    realize_vectors(families.back());
  }
  std::vector<const ScaleFamily*> ptrs;
  for (auto& f : families) ptrs.push_back(&f);
  StackedEmbedding F = stacked_embedding(ptrs, model->identity());

  for (size_t i = 0; i < ball.size(); ++i) {
    for (size_t j = i + 1; j < ball.size(); ++j) {
      // ||F(x)-F(y)||^2 = (1/4) sum_l ||eta_l(x)-eta_l(y)||^2, exactly
      double lhs = (F(i) - F(j)).squaredNorm();
      double rhs = 0.0;
      size_t levels_far = 0;
      for (const ScaleFamily* f : ptrs) {
        double pd = f->pair_distance(i, j);
        rhs += pd * pd;
        if (pd >= 1.0) ++levels_far;
      }
      CHECK(lhs == doctest::Approx(0.25 * rhs).epsilon(1e-9));
      // every level past its far threshold contributes at least 1/4
      CHECK(lhs >= 0.25 * static_cast<double>(levels_far) - 1e-9);
    }
  }
  CHECK(F.tail_constant(1, 0.05) ==
        doctest::Approx(0.25 * (1.0 + std::pow(2.0, -1.1) +
                                std::pow(3.0, -1.1))));
}
