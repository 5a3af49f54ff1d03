#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "pklab/reduce.hpp"
#include "test_support.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace pklab;

TEST_CASE("parallel tree sum is bitwise identical to the serial reference") {
  testsupport::Rng rng(42);
  for (std::size_t count : {std::size_t(0), std::size_t(1), std::size_t(1023), std::size_t(1024),
                            std::size_t(1025), std::size_t(50'000), std::size_t(262'145)}) {
    std::vector<double> data(count);
    for (double& v : data) v = rng.uniform(-1.0, 1.0);
    const auto term = [&](std::size_t i) { return data[i]; };
    CHECK(tree_sum(count, term) == tree_sum_serial(count, term));
  }
}

#ifdef _OPENMP
TEST_CASE("tree sum does not depend on the thread count") {
  testsupport::Rng rng(7);
  std::vector<double> data(200'000);
  for (double& v : data) v = rng.uniform(-1e3, 1e3);
  const auto term = [&](std::size_t i) { return data[i]; };

  const int saved = omp_get_max_threads();
  std::vector<double> results;
  for (int threads : {1, 2, 3, 7}) {
    omp_set_num_threads(threads);
    results.push_back(tree_sum(data.size(), term));
  }
  omp_set_num_threads(saved);
  for (double r : results) CHECK(r == results.front());
}
#endif

TEST_CASE("tree sum agrees with a naive accumulation") {
  testsupport::Rng rng(11);
  std::vector<double> data(77'777);
  for (double& v : data) v = rng.uniform(0.0, 1.0);
  const auto term = [&](std::size_t i) { return data[i]; };
  const double tree = tree_sum(data.size(), term);
  const double naive = naive_sum(data.size(), term);
  CHECK(std::abs(tree - naive) <= 1e-10 * std::abs(naive));
}

TEST_CASE("tree sum beats naive accumulation on an ill-conditioned series") {
  // alternating large/small terms: the pairwise tree keeps the error flat
  const std::size_t count = 1 << 20;
  const auto term = [](std::size_t i) { return i % 2 == 0 ? 1.0 : 1e-16; };
  const double tree = tree_sum(count, term);
  const double expected = (count / 2) * 1.0 + (count / 2) * 1e-16;
  CHECK(tree == doctest::Approx(expected).epsilon(1e-15));
}
