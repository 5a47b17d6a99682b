#include <doctest.h>

#include <cmath>

#include "uecomp/combine.hpp"

using namespace uecomp;

namespace {

EmbeddingFn induced_length_embed(const ExtensionModel& ext) {
  return [&ext](const Element& h) {
    Eigen::VectorXd v(1);
    double sign = h.w.empty() || h.w[0] >= 0 ? 1.0 : -1.0;
    v(0) = sign * ext.kernel_induced_length(h);
    return v;
  };
}

CombineBuild trivial_build(int64_t n, double gamma_radius) {
  auto q = make_group("Z");
  auto k = make_group("dsum:1,2,2,2");
  auto ext = make_trivial_extension(q, k);
  auto g = std::make_shared<PolyFamily>(poly_family(q, n, 0.05));
  g->materialize_support();
  return build_combined(ext, quotient_family_poly(g), g->support_radius(), n,
                        0.05, 1.0, false, induced_length_embed(*ext),
                        gamma_radius);
}

}  // namespace

TEST_CASE("extension scales formulas") {
  ExtensionScales poly = ExtensionScales::nominal(4, 0.05, 1.0, false);
  CHECK(poly.S_G == doctest::Approx(std::pow(4.0, 1.75)).epsilon(1e-14));
  CHECK(poly.S_H == doctest::Approx(std::pow(4.0, (2.0 + 8.0 * 0.05) / 0.95))
                        .epsilon(1e-12));
  CHECK(poly.S_bar == doctest::Approx(std::pow(4.0, 0.05) * poly.S_H));
  CHECK(poly.near_radius == doctest::Approx(2.0));
  ExtensionScales hyp = ExtensionScales::nominal(4, 0.05, 1.0, true);
  CHECK(hyp.S_G == doctest::Approx(std::pow(4.0, 2.3)).epsilon(1e-14));
  CHECK(hyp.S_H == doctest::Approx(std::pow(4.0, (2.5 + 9.0 * 0.05) / 0.95))
                       .epsilon(1e-12));
  CHECK(hyp.near_radius == doctest::Approx(std::log(4.0)));
  CHECK(poly.S_bar > poly.S_H);
  CHECK_THROWS_AS(ExtensionScales::nominal(1, 0.05, 1.0, false),
                  InvalidSpecError);
}

TEST_CASE("project_to_kernel inverts the section decomposition") {
  auto ext = make_heisenberg_extension(12);
  const GroupModel& total = ext->total();
  // kernel elements come back unchanged: sigma(1) = 1 by minimal lift
  Element central{{0, 0, 3}};
  CHECK(ext->project_to_kernel(central) == Element{{3}});
  // section images project to the kernel identity
  Element x{{2, -1}};
  CHECK(ext->project_to_kernel(ext->section(x)) == Element{{0}});
  // reconstruction gamma = embed(h) * sigma(pi(gamma)) for every gamma
  Ball ball = enumerate_ball(total, 4);
  for (const BallEntry& e : ball.entries()) {
    Element h = ext->project_to_kernel(e.x);
    Element rebuilt =
        total.mul(ext->embed_kernel(h), ext->section(ext->project(e.x)));
    CHECK(rebuilt == e.x);
  }
  // gamma = x*y: central part of the normal form
  Element xy = total.mul(Element{{1, 0, 0}}, Element{{0, 1, 0}});
  CHECK(xy == Element{{1, 1, 1}});
  Element lift = ext->section(Element{{1, 1}});
  CHECK(ext->project_to_kernel(xy) ==
        Element{{xy.w[2] - lift.w[2]}});
}

TEST_CASE("heisenberg induced center length is symmetric and subadditive") {
  auto ext = make_heisenberg_extension(16);
  // l(z) = 4 via the commutator x y x^-1 y^-1
  CHECK(ext->kernel_induced_length(Element{{1}}) == 4.0);
  CHECK(ext->kernel_induced_length(Element{{0}}) == 0.0);
  for (int64_t c : {1, 2, 3, 5, 9}) {
    double l = ext->kernel_induced_length(Element{{c}});
    double linv = ext->kernel_induced_length(Element{{-c}});
    CHECK(l == linv);
    CHECK(l >= std::sqrt(static_cast<double>(c)));  // growth ~ sqrt(|c|)
  }
}

TEST_CASE("combined family has exact unit norms") {
  CombineBuild build = trivial_build(2, 2.0);
  for (const BallEntry& e : build.gamma_ball->entries())
    CHECK(std::abs(build.f->norm(e.x) - 1.0) <= 1e-12);
  CHECK(build.f->out_of_domain_count() == 0);
}

TEST_CASE("trivial extension inner products factorize") {
  auto q = make_group("Z");
  auto k = make_group("dsum:1,2,2,2");
  auto ext = make_trivial_extension(q, k);
  const auto* product = dynamic_cast<const ProductGroupModel*>(&ext->total());
  REQUIRE(product);
  int64_t n = 2;
  auto g = std::make_shared<PolyFamily>(poly_family(q, n, 0.05));
  g->materialize_support();
  CombineBuild build =
      build_combined(ext, quotient_family_poly(g), g->support_radius(), n,
                     0.05, 1.0, false, induced_length_embed(*ext), 2.0);
  const Ball& ball = *build.gamma_ball;
  for (size_t i = 0; i < ball.size(); ++i) {
    for (size_t j = i; j < ball.size(); ++j) {
      auto ip = build.f->inner(ball[i].x, ball[j].x);
      REQUIRE(ip.has_value());
      // factor inners: quotient indicator family times kernel gram
      Element gi = product->first_part(ball[i].x);
      Element gj = product->first_part(ball[j].x);
      Element hi = product->second_part(ball[i].x);
      Element hj = product->second_part(ball[j].x);
      double g_ip = g->inner(gi, gj);
      auto idx0 = build.kernel_ball->find(hi);
      auto idx1 = build.kernel_ball->find(hj);
      REQUIRE(idx0.has_value());
      REQUIRE(idx1.has_value());
      double h_ip = build.h->gram()(static_cast<Eigen::Index>(*idx0),
                                    static_cast<Eigen::Index>(*idx1));
      CHECK(*ip == doctest::Approx(g_ip * h_ip).epsilon(1e-9));
    }
  }
}

TEST_CASE("verify_combined near bullets pass and far rows flag vacuity") {
  CombineBuild build = trivial_build(2, 2.0);
  VerificationReport report = verify_combined(*build.f, *build.gamma_ball);
  const ReportRow* unit = report.row("unit_norm");
  REQUIRE(unit != nullptr);
  CHECK(unit->violations == 0);
  const ReportRow* near = report.row("near_inner");
  REQUIRE(near != nullptr);
  CHECK(near->violations == 0);
  CHECK_FALSE(near->vacuous);
  const ReportRow* near_d = report.row("near_distance");
  REQUIRE(near_d != nullptr);
  CHECK(near_d->violations == 0);
  const ReportRow* far = report.row("far_distance");
  REQUIRE(far != nullptr);
  CHECK(far->vacuous);
  CHECK(far->note.find("ball radius below") != std::string::npos);
}

TEST_CASE("support precondition violations are rejected with the element") {
  auto q = make_group("Z");
  auto k = make_group("dsum:1,2,2,2");
  auto ext = make_trivial_extension(q, k);
  auto g = std::make_shared<PolyFamily>(poly_family(q, 2, 0.05));
  g->materialize_support();
  // claim a support radius below the real one
  CHECK_THROWS_AS(
      build_combined(ext, quotient_family_poly(g),
                     g->support_radius() / 2.0, 2, 0.05, 1.0, false,
                     induced_length_embed(*ext), 2.0),
      InvalidSpecError);
}
