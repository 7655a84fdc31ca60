#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "seqcred/random.hpp"

using seqcred::RandomStream;

TEST_CASE("identical identity reproduces the identical draw sequence") {
  RandomStream a(42, 7), b(42, 7);
  for (int k = 0; k < 1000; ++k) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RandomStream c(42, 7), d(42, 7);
  for (int k = 0; k < 1000; ++k) {
    CHECK(c.normal() == d.normal());
  }
}

TEST_CASE("distinct stream ids decorrelate") {
  RandomStream a(42, 0), b(42, 1);
  int equal = 0;
  for (int k = 0; k < 1000; ++k) equal += (a.next_u64() == b.next_u64());
  CHECK(equal == 0);
}

TEST_CASE("substreams depend on identity, not consumption") {
  RandomStream parent(9, 3);
  RandomStream before = parent.substream(5);
  parent.normal();
  parent.normal();
  RandomStream after = parent.substream(5);
  CHECK(before.stream_id() == after.stream_id());
  CHECK(before.normal() == after.normal());

  // sibling tags differ
  CHECK(parent.substream(5).stream_id() != parent.substream(6).stream_id());
}

TEST_CASE("uniform draws stay strictly inside (0,1)") {
  RandomStream rng(1);
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have standard moments") {
  RandomStream rng(3);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / n));
}
