#include <doctest.h>

#include <functional>

#include "oracles.hpp"
#include "uecomp/ball.hpp"

using namespace uecomp;
using uecomp::test::WreathOracle;
using uecomp::test::cayley_bfs;

namespace {

Element lamp_element(const GroupModel& model, const std::vector<int64_t>& lamps,
                     int64_t lo) {
  Element e;
  for (size_t i = 0; i < lamps.size(); ++i) {
    if (lamps[i] == 0) continue;
    Element one{{lo + static_cast<int64_t>(i), lamps[i]}};
    e = model.mul(e, one);
  }
  return e;
}

void enumerate_configs(int64_t width, int64_t vmin, int64_t vmax,
                       std::vector<int64_t>& current,
                       const std::function<void(const std::vector<int64_t>&)>&
                           visit) {
  if (static_cast<int64_t>(current.size()) == width) {
    visit(current);
    return;
  }
  for (int64_t v = vmin; v <= vmax; ++v) {
    current.push_back(v);
    enumerate_configs(width, vmin, vmax, current, visit);
    current.pop_back();
  }
}

}  // namespace

TEST_CASE("word lengths match Cayley BFS on every word-metric model") {
  for (const char* text : {"Z", "Z^2", "Z^3", "F1", "F2", "F3", "heisenberg"}) {
    auto model = make_group(text);
    auto oracle = cayley_bfs(*model, 6);
    Ball ball = enumerate_ball(*model, 6);
    REQUIRE(ball.size() == oracle.size());
    for (const BallEntry& e : ball.entries())
      CHECK(model->length(e.x) == static_cast<double>(
                                      oracle.at(canonical_bytes(e.x))));
  }
}

TEST_CASE("mod-2 lamplighter closed form matches the wreath BFS oracle") {
  auto model = make_group("lamplighter:2");
  WreathOracle oracle;
  oracle.q = 2;
  oracle.run();
  std::vector<int64_t> current;
  size_t checked = 0;
  enumerate_configs(7, 0, 1, current, [&](const std::vector<int64_t>& lamps) {
    int64_t ref = oracle.length(lamps);
    REQUIRE(ref >= 0);
    Element e = lamp_element(*model, lamps, oracle.lo);
    CHECK(model->length(e) == static_cast<double>(ref));
    ++checked;
  });
  CHECK(checked == 128);
}

TEST_CASE("Z-lamp lamplighter closed form matches the wreath BFS oracle") {
  auto model = make_group("lamplighter:inf");
  WreathOracle oracle;
  oracle.q = 0;
  oracle.value_cap = 2;
  oracle.run();
  std::vector<int64_t> current;
  size_t checked = 0;
  enumerate_configs(7, -2, 2, current, [&](const std::vector<int64_t>& lamps) {
    int64_t ref = oracle.length(lamps);
    REQUIRE(ref >= 0);
    Element e = lamp_element(*model, lamps, oracle.lo);
    CHECK(model->length(e) == static_cast<double>(ref));
    ++checked;
  });
  CHECK(checked == 78125);
}
