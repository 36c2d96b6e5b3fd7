#include <doctest.h>

#include <cmath>
#include <vector>

#include "qtdt/rng.hpp"

using qtdt::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derived streams are independent of parent draws") {
  Rng parent(7);
  const Rng child_before = parent.derive(3);
  for (int i = 0; i < 50; ++i) parent.next_u64();
  const Rng child_after = parent.derive(3);
  CHECK(child_before.stream_id() == child_after.stream_id());
  CHECK(parent.derive(3).stream_id() != parent.derive(4).stream_id());
}

TEST_CASE("uniform doubles stay in range and fill it") {
  Rng rng(1);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("next_below is within bounds and roughly uniform") {
  Rng rng(5);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.next_below(5)];
  for (const int c : counts) CHECK(std::fabs(c / 50000.0 - 0.2) < 0.01);
}

TEST_CASE("normal variates have the right first two moments") {
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.02);
  CHECK(std::fabs(var - 1.0) < 0.03);
}

TEST_CASE("bernoulli frequency matches p") {
  Rng rng(3);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += rng.next_bernoulli(0.3);
  CHECK(std::fabs(hits / 100000.0 - 0.3) < 0.01);
}

}  // TEST_SUITE
