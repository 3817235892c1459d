#include <cmath>
#include <vector>

#include "doctest.h"
#include "voxelforge/rng.hpp"

using voxelforge::Rng;

TEST_CASE("same seed, same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("stream is pinned across standard libraries") {
  // mt19937_64 is fully specified; the 10000th output for the default seed
  // is fixed by the standard.
  Rng r(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = r.next_u64();
  CHECK(v == 9981545732273789042ull);
}

TEST_CASE("uniform stays in [0, 1) and has the right mean") {
  Rng r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("index is unbiased over a non power of two") {
  Rng r(7);
  std::vector<int> counts(3, 0);
  for (int i = 0; i < 30000; ++i) ++counts[r.index(3)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 400);
  for (int i = 0; i < 100; ++i) CHECK(r.index(1) == 0);
}

TEST_CASE("normal has the requested moments") {
  Rng r(3);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(2.0, 0.5);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(2.0).epsilon(0.005));
  CHECK(std::sqrt(sq / n - mean * mean) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("split streams are reproducible and distinct from the parent") {
  Rng a(9), b(9);
  Rng ca = a.split(), cb = b.split();
  CHECK(ca.next_u64() == cb.next_u64());
  CHECK(a.next_u64() != ca.next_u64());
}
