#include <doctest.h>

#include "oracles.hpp"
#include "rectilib/errors.hpp"
#include "rectilib/generators.hpp"
#include "rectilib/nets.hpp"

using namespace rectilib;

namespace {

void check_axioms_by_oracle(const NetHierarchy& h, const MetricMeasureSpace& s) {
  for (int n = h.n_min; n <= h.n_max; ++n) {
    CHECK(oracle::separated(s, h.level(n), h.scale(n)));
    CHECK(oracle::covers(s, h.level(n), h.scale(n)));
    if (n > h.n_min) CHECK(oracle::subset(h.level(n - 1), h.level(n)));
  }
}

}  // namespace

TEST_CASE("singleton space") {
  const auto s = MetricMeasureSpace::from_coords(1, {0.5}, {1.0});
  const auto h = build_nets(s, 0.5, 0, 4);
  for (int n = 0; n <= 4; ++n) CHECK(h.level(n) == std::vector<PointId>{0});
  CHECK(verify_nets(h, s).ok());
}

TEST_CASE("a point at exactly the scale is admitted") {
  const auto s = MetricMeasureSpace::from_coords(1, {0.0, 1.0}, {1.0, 1.0});
  const auto h = build_nets(s, 0.5, 0, 0);
  CHECK(h.level(0) == std::vector<PointId>{0, 1});
}

TEST_CASE("uniform segment levels grow by about 1/rho") {
  const auto g = generate({GeneratorKind::interval, 1000, {}, 0});
  const auto h = build_nets(g.space, 0.25, 0, 6);
  check_axioms_by_oracle(h, g.space);
  // Level 0 holds the two endpoints only; growth is measured past it.
  for (int n = 2; n <= 4; ++n) {
    const double ratio = double(h.level(n).size()) / double(h.level(n - 1).size());
    CHECK(ratio >= 2.5);
    CHECK(ratio <= 5.5);
  }
  CHECK(h.level(6).size() == 1000);
}

TEST_CASE("level sizes are nondecreasing and builds are repeatable") {
  for (auto spec : {GeneratorSpec{GeneratorKind::cascade, 4, {}, 0},
                    GeneratorSpec{GeneratorKind::koch, 3, {}, 0},
                    GeneratorSpec{GeneratorKind::circle, 300, {}, 0}}) {
    const auto g = generate(spec);
    for (auto order : {ScanOrder::ascending_id, ScanOrder::farthest_point}) {
      const auto a = build_nets(g.space, 1.0 / 3.0, 0, 5, {{}, order});
      const auto b = build_nets(g.space, 1.0 / 3.0, 0, 5, {{}, order});
      CHECK(a.levels == b.levels);
      for (int n = 1; n <= 5; ++n) CHECK(a.level(n).size() >= a.level(n - 1).size());
      check_axioms_by_oracle(a, g.space);
      CHECK(verify_nets(a, g.space).ok());
    }
  }
}

TEST_CASE("verify_nets reports injected violations") {
  const auto g = generate({GeneratorKind::interval, 200, {}, 0});
  auto h = build_nets(g.space, 0.25, 0, 3);
  REQUIRE(verify_nets(h, g.space).ok());

  SUBCASE("deleting a finest point opens a covering gap") {
    auto broken = h;
    auto& fine = broken.levels.back();
    fine.erase(fine.begin() + static_cast<long>(fine.size() / 2));
    const auto rep = verify_nets(broken, g.space);
    CHECK_FALSE(rep.covering);
    REQUIRE(rep.covering_witness);
    CHECK(rep.covering_witness->distance >= broken.scale(3));
    CHECK_FALSE(rep.nesting);
  }
  SUBCASE("a duplicated nearby point breaks separation") {
    auto broken = h;
    auto& lvl = broken.levels[1];
    const PointId p = lvl.front();
    lvl.push_back(p + 1);
    std::sort(lvl.begin(), lvl.end());
    const auto rep = verify_nets(broken, g.space);
    CHECK_FALSE(rep.separation);
    REQUIRE(rep.separation_witness);
    CHECK(rep.separation_witness->distance < broken.scale(1));
  }
}

TEST_CASE("seeds and parameters") {
  const auto g = generate({GeneratorKind::interval, 50, {}, 0});
  const auto h = build_nets(g.space, 0.5, 0, 3, {{25}, ScanOrder::ascending_id});
  CHECK(h.level(0).size() == 1);
  CHECK(h.level(0).front() == 25);
  CHECK_THROWS_AS(build_nets(g.space, 1.0, 0, 1), ParameterError);
  CHECK_THROWS_AS(build_nets(g.space, 0.5, 2, 1), ParameterError);
  CHECK_THROWS_AS(build_nets(g.space, 0.5, 0, 1, {{0, 1}, ScanOrder::ascending_id}), ParameterError);
  CHECK_FALSE(build_nets(g.space, 0.5, 1, 2).warnings.empty());
}

TEST_CASE("coarsest and saturation levels") {
  CHECK(coarsest_level(0.5, 1.0) == -1);
  CHECK(coarsest_level(0.5, 0.3) == 1);
  CHECK(coarsest_level(0.25, 2.0) == -1);
  for (double rho : {0.5, 0.25, 1.0 / 12.0})
    for (double d : {0.01, 0.3, 1.0, 7.0}) {
      const int n = coarsest_level(rho, d);
      CHECK(std::pow(rho, n) > d);
      CHECK(std::pow(rho, n + 1) <= d);
    }
  const auto g = generate({GeneratorKind::interval, 100, {}, 0});
  const int top = coarsest_level(1.0 / 12.0, diameter(g.space));
  CHECK(build_nets(g.space, 1.0 / 12.0, top, top).level(top).size() == 1);
  const int sat = saturation_level(g.space, 0.5, 0);
  const auto h = build_nets(g.space, 0.5, 0, sat);
  CHECK(h.level(sat).size() == 100);
  CHECK(h.level(sat - 1).size() < 100);
}

TEST_CASE("packing counts stay bounded across scales on doubling spaces") {
  const auto g = generate({GeneratorKind::grid2d, 32, {}, 0});
  const auto h = build_nets(g.space, 0.25, 0, 4);
  const auto counts = packing_counts(h, g.space);
  REQUIRE(counts.size() == 4);
  // X_{n+1} is rho^{n+1}-separated, so at most (2/rho + 1)^2 of its points fit
  // in a ball of radius rho^n in the plane.
  for (auto c : counts) CHECK(c <= 81);
}
