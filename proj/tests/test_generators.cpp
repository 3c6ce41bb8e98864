#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rectilib/errors.hpp"
#include "rectilib/generators.hpp"

using namespace rectilib;

TEST_CASE("interval with four points") {
  const auto g = generate({GeneratorKind::interval, 4, {{"e_lo", {0.0}}, {"e_hi", {1.0}}}, 0});
  REQUIRE(g.space.size() == 4);
  const double want[] = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  for (PointId p = 0; p < 4; ++p) {
    CHECK(g.space.coords(p)[0] == doctest::Approx(want[p]).epsilon(1e-15));
    CHECK(g.space.weight(p) == 0.5);
  }
  CHECK(g.target.members.size() == 4);
  // Default target is the middle half; holes are open gaps.
  const auto mid = generate({GeneratorKind::interval, 9, {}, 0});
  CHECK(mid.target.members == std::vector<PointId>{2, 3, 4, 5, 6});
  const auto holed = generate({GeneratorKind::interval, 9, {{"holes", {0.3, 0.6}}}, 0});
  CHECK(holed.target.members == std::vector<PointId>{2, 5, 6});
}

TEST_CASE("cantor4 at level one is the four corners") {
  const auto g = generate({GeneratorKind::cantor4, 1, {}, 0});
  REQUIRE(g.space.size() == 4);
  const double corners[4][2] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (PointId p = 0; p < 4; ++p) {
    CHECK(g.space.coords(p)[0] == doctest::Approx(corners[p][0]).epsilon(1e-15));
    CHECK(g.space.coords(p)[1] == doctest::Approx(corners[p][1]).epsilon(1e-15));
    CHECK(g.space.weight(p) == 0.25);
  }
  // Deeper levels stay inside the unit square with equal weights.
  const auto deep = generate({GeneratorKind::cantor4, 4, {}, 0});
  CHECK(deep.space.size() == 256);
  for (PointId p = 0; p < deep.space.size(); ++p) {
    const auto x = deep.space.coords(p);
    CHECK(x[0] >= 0.0);
    CHECK(x[0] <= 1.0 + 1e-12);
    CHECK(x[1] <= 1.0 + 1e-12);
  }
}

TEST_CASE("cascade masses match a top-down recursion") {
  for (const std::vector<double>& ratios : {std::vector<double>{0.3, 0.2, 0.3, 0.2}, std::vector<double>{1, 2, 3, 4}}) {
    const int depth = 6;
    const auto g = generate({GeneratorKind::cascade, depth, {{"ratios", ratios}}, 0});
    REQUIRE(g.space.size() == 4096);
    double total = 0.0;
    for (double r : ratios) total += r;
    std::vector<double> norm;
    for (double r : ratios) norm.push_back(r / total);
    std::vector<double> want(4096);
    oracle::cascade_masses(norm, depth, 0, 0, 64, 1.0, 64, want);
    double sum = 0.0;
    for (PointId p = 0; p < 4096; ++p) {
      CHECK(g.space.weight(p) == doctest::Approx(want[p]).epsilon(1e-13));
      sum += g.space.weight(p);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    std::vector<double> radii{0.02, 0.05, 0.1, 0.2};
    std::vector<PointId> centers;
    for (PointId p = 0; p < 4096; p += 61) centers.push_back(p);
    CHECK(std::isfinite(doubling_estimate(g.space, radii, centers).c_hat));
  }
}

TEST_CASE("koch polyline") {
  const auto v = koch_vertices(2);
  CHECK(v.size() == 2 * 17);
  CHECK(v.front() == 0.0);
  CHECK(v[v.size() - 2] == doctest::Approx(1.0));
  double len = 0.0;
  for (std::size_t k = 2; k < v.size(); k += 2) len += std::hypot(v[k] - v[k - 2], v[k + 1] - v[k - 1]);
  CHECK(len == doctest::Approx(16.0 / 9.0).epsilon(1e-12));
  const auto g = generate({GeneratorKind::koch, 3, {}, 0});
  CHECK(g.space.size() == 64);
  CHECK(g.space.weight(0) == 1.0 / 64.0);
}

TEST_CASE("lower mass bound on interval and circle") {
  auto check = [](const Generated& g, std::size_t n) {
    const double diam = diameter(g.space);
    for (double r = 2.0 / double(n) * 1.01; r < 0.25 * diam; r *= 1.3)
      for (PointId p = 0; p < g.space.size(); p += 7) {
        // Interior: the ball stays away from the ends of an open curve.
        const auto x = g.space.coords(p);
        if (g.space.dim() == 1 && (x[0] < r || x[0] > 1.0 - r)) continue;
        CHECK(oracle::ball_mass(g.space, p, r) >= 2.0 * r);
      }
  };
  check(generate({GeneratorKind::interval, 500, {}, 0}), 500);
  check(generate({GeneratorKind::circle, 500, {{"mu_r", {1.0}}}, 0}), 500);
}

TEST_CASE("every generator yields a valid space") {
  const std::vector<GeneratorSpec> specs{
      {GeneratorKind::interval, 50, {}, 0},      {GeneratorKind::circle, 50, {}, 0},
      {GeneratorKind::grid2d, 7, {}, 0},         {GeneratorKind::cantor4, 2, {}, 0},
      {GeneratorKind::koch, 2, {}, 0},           {GeneratorKind::cascade, 3, {}, 0},
      {GeneratorKind::lipschitz_curve, 40, {{"polyline", {0, 0, 1, 0, 1, 1}}, {"coils", {3}}, {"mass", {2}}}, 0}};
  for (const auto& spec : specs) {
    CAPTURE(to_string(spec.kind));
    const auto g = generate(spec);
    CHECK(triangle_defect(g.space, 2000, 1) <= 1e-12);
    for (PointId p = 0; p < g.space.size(); ++p) CHECK(g.space.weight(p) >= 0.0);
    CHECK_NOTHROW(validate_target(g.space, g.target));
    CHECK(parse_generator_kind(to_string(spec.kind)) == spec.kind);
  }
  double mass = 0.0;
  const auto lc = generate(specs.back());
  for (PointId p = 0; p < lc.space.size(); ++p) mass += lc.space.weight(p);
  CHECK(mass == doctest::Approx(2.0));
}

TEST_CASE("generator parameter errors") {
  CHECK_THROWS_AS(generate({GeneratorKind::cascade, 3, {{"ratios", {0.3, 0.0, 0.3, 0.4}}}, 0}), ParameterError);
  CHECK_THROWS_AS(generate({GeneratorKind::cascade, 3, {{"ratios", {0.3, 0.3}}}, 0}), ParameterError);
  CHECK_THROWS_AS(generate({GeneratorKind::interval, 1, {}, 0}), ParameterError);
  CHECK_THROWS_AS(generate({GeneratorKind::cantor4, 0, {}, 0}), ParameterError);
  CHECK_THROWS_AS(generate({GeneratorKind::interval, 10, {{"holes", {0.3}}}, 0}), ParameterError);
  CHECK_THROWS_AS(generate({GeneratorKind::interval, 10, {{"e_lo", {2.0}}, {"e_hi", {3.0}}}, 0}), ParameterError);
  CHECK_THROWS_AS(generate({GeneratorKind::lipschitz_curve, 10, {{"coils", {1.5}}}, 0}), ParameterError);
  CHECK_THROWS_AS(parse_generator_kind("sierpinski"), ParameterError);
}
