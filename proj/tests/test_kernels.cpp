#include <doctest.h>

#include <cstdlib>
#include <numeric>
#include <omp.h>

#include "oracles.hpp"
#include "rectilib/generators.hpp"
#include "rectilib/kernels.hpp"

using namespace rectilib;
namespace ser = rectilib::kernels::serial;
namespace par = rectilib::kernels::parallel;

namespace {

std::vector<PointId> stride(std::size_t n, std::size_t step, std::size_t offset = 0) {
  std::vector<PointId> out;
  for (PointId p = offset; p < n; p += step) out.push_back(p);
  return out;
}

const std::vector<MetricMeasureSpace>& spaces() {
  static const std::vector<MetricMeasureSpace> all = [] {
    std::vector<MetricMeasureSpace> v;
    v.push_back(generate({GeneratorKind::cascade, 5, {}, 0}).space);
    v.push_back(generate({GeneratorKind::koch, 4, {}, 0}).space);
    v.push_back(generate({GeneratorKind::interval, 777, {}, 0}).space);
    // A matrix space: the interval distances written out explicitly.
    const std::size_t n = 60;
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] = std::abs(double(i) - double(j)) / 7.0;
    v.push_back(MetricMeasureSpace::from_matrix(m, std::vector<double>(n, 0.5)));
    return v;
  }();
  return all;
}

}  // namespace

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  for (int threads : {1, 2, 4, 7}) {
    omp_set_num_threads(threads);
    for (const auto& s : spaces()) {
      const auto centers = stride(s.size(), 3);
      const std::vector<double> radii{0.5, 0.2, 0.07, 0.01};
      CHECK(par::ball_masses(s, centers, radii) == ser::ball_masses(s, centers, radii));

      const auto set = stride(s.size(), 11, 2);
      CHECK(par::distance_to_set(s, set) == ser::distance_to_set(s, set));
      CHECK(par::nearest_neighbor(s, centers) == ser::nearest_neighbor(s, centers));
      CHECK(par::nearest_member(s, centers, set) == ser::nearest_member(s, centers, set));
      CHECK(par::diameter(s) == ser::diameter(s));

      std::vector<double> a(s.size(), 1e9), b(s.size(), 1e9);
      par::relax_distances(s, 5, a, 3);
      ser::relax_distances(s, 5, b, 3);
      CHECK(a == b);

      std::vector<std::size_t> owner(s.size());
      for (PointId p = 0; p < s.size(); ++p) owner[p] = p % set.size();
      CHECK(par::distance_to_foreign(s, set, owner) == ser::distance_to_foreign(s, set, owner));
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("serial kernels agree with brute force") {
  const auto& s = spaces().front();
  const auto centers = stride(s.size(), 13);
  const std::vector<double> radii{0.3, 0.05};
  const auto masses = ser::ball_masses(s, centers, radii);
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t k = 0; k < radii.size(); ++k)
      CHECK(masses[i * radii.size() + k] ==
            doctest::Approx(oracle::ball_mass(s, centers[i], radii[k])).epsilon(1e-12));

  const auto set = stride(s.size(), 17, 4);
  const auto near = ser::nearest_member(s, centers, set);
  const auto dset = ser::distance_to_set(s, set);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    PointId best = set.front();
    for (PointId q : set)
      if (oracle::euclid(s, centers[i], q) < oracle::euclid(s, centers[i], best)) best = q;
    CHECK(near[i] == best);
    CHECK(dset[centers[i]] == doctest::Approx(oracle::euclid(s, centers[i], best)));
  }
  double diam = 0.0;
  for (PointId p = 0; p < s.size(); ++p)
    for (PointId q = p + 1; q < s.size(); ++q) diam = std::max(diam, oracle::euclid(s, p, q));
  CHECK(ser::diameter(s) == doctest::Approx(diam));
}

TEST_CASE("nearest member breaks ties toward the smaller id") {
  const auto s = MetricMeasureSpace::from_coords(1, {0.0, -1.0, 1.0}, {1, 1, 1});
  const std::vector<PointId> q{0}, set{1, 2};
  CHECK(par::nearest_member(s, q, set) == std::vector<PointId>{1});
  CHECK(ser::nearest_member(s, q, set) == std::vector<PointId>{1});
}

TEST_CASE("thread cap from the environment") {
  ::setenv("RECTILIB_THREADS", "3", 1);
  CHECK(kernels::apply_thread_cap_from_env() == 3);
  ::setenv("RECTILIB_THREADS", "zero", 1);
  CHECK(kernels::apply_thread_cap_from_env() == 0);
  ::unsetenv("RECTILIB_THREADS");
  CHECK(kernels::apply_thread_cap_from_env() == 0);
  omp_set_num_threads(1);
}
