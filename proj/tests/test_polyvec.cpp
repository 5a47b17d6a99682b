#include <doctest.h>

#include <cmath>

#include "uecomp/polyvec.hpp"

using namespace uecomp;

TEST_CASE("indicator inner products are intersection ratios") {
  auto model = make_group("Z");
  PolyFamily family = poly_family(model, 4, 0.05);
  CHECK(family.k() == 39);
  CHECK(family.ball_k_count() == 79);  // 2k+1
  CHECK(family.inner(model->identity(), model->identity()) == 1.0);
  // |B(0,39) /\ B(5,39)| = 74 points of [-34, 39]
  Element five{{5}};
  CHECK(family.intersection_count(five) == 74);
  CHECK(family.inner(model->identity(), five) ==
        doctest::Approx(74.0 / 79.0).epsilon(1e-14));
  // symmetry and translation invariance
  Element a{{-3}}, b{{2}};
  CHECK(family.inner(a, b) == doctest::Approx(family.inner(b, a)));
  CHECK(family.inner(a, b) ==
        doctest::Approx(family.inner_from_difference(Element{{5}})));
}

TEST_CASE("materialized support matches the closed-form counts") {
  auto model = make_group("Z^2");
  PolyFamily family = poly_family(model, 2, 0.05);
  family.materialize_support();
  Element x{{1, -1}};
  std::vector<Element> supp = family.support(x);
  CHECK(supp.size() == family.ball_k_count());
  for (const Element& s : supp)
    CHECK(model->dist(x, s) <= family.support_radius());
  CHECK(family.weight() ==
        doctest::Approx(1.0 / std::sqrt(static_cast<double>(
                                  family.ball_k_count()))));
  // unit norm: |supp| * weight^2 = 1
  CHECK(static_cast<double>(supp.size()) * family.weight() * family.weight() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generic intersection route agrees with closed form") {
  auto z2 = make_group("Z^2");
  PolyFamily closed = poly_family(z2, 2, 0.05);
  closed.materialize_support();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    Element z = z2->sample(rng);
    uint64_t brute = 0;
    for (const Element& s : closed.support(z2->identity()))
      if (z2->dist(z, s) <= closed.support_radius()) ++brute;
    CHECK(closed.intersection_count(z) == brute);
  }
}

TEST_CASE("poly lemma condition 1 holds with zero violations at small n") {
  for (int64_t n : {2, 4, 8, 16}) {
    VerificationReport report = verify_poly_lemma(make_group("Z"), n, 0.05);
    const ReportRow* near = report.row("near");
    REQUIRE(near != nullptr);
    CHECK(near->violations == 0);
    CHECK(near->pairs_checked ==
          2 * static_cast<uint64_t>(std::sqrt(static_cast<double>(n))) + 1);
  }
  VerificationReport z2 = verify_poly_lemma(make_group("Z^2"), 4, 0.05);
  REQUIRE(z2.row("near") != nullptr);
  CHECK(z2.row("near")->violations == 0);
}

TEST_CASE("poly lemma support row reports the bound honestly") {
  VerificationReport report = verify_poly_lemma(make_group("Z"), 4, 0.05);
  const ReportRow* support = report.row("support");
  REQUIRE(support != nullptr);
  // k(4) = 39 > 4^{1.75}: the small-n failure must be reported, not hidden
  CHECK(support->violations == 1);
  CHECK(support->worst_margin ==
        doctest::Approx(std::pow(4.0, 1.75) - 39.0).epsilon(1e-12));
  CHECK(support->note.find("n >= n0") != std::string::npos);
}
