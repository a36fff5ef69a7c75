#include <doctest.h>

#include "levershap/error.hpp"
#include "levershap/rng.hpp"

using namespace levershap;

TEST_CASE("same seed reproduces the stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in [0, 1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_index covers the range and rejects zero") {
  Rng rng(3);
  bool seen[5] = {};
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.uniform_index(5);
    REQUIRE(k < 5);
    seen[k] = true;
  }
  for (const bool s : seen) CHECK(s);
  CHECK_THROWS_AS(rng.uniform_index(0), InvalidArgumentError);
}

TEST_CASE("normal has roughly the requested moments") {
  Rng rng(7);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(2.0, 0.5);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
  CHECK(var == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("named streams are independent and reproducible") {
  Rng env1 = named_stream(9, "env");
  Rng env2 = named_stream(9, "env");
  Rng agent = named_stream(9, "agent");
  CHECK(env1.next_u64() == env2.next_u64());
  Rng env3 = named_stream(9, "env");
  CHECK(env3.next_u64() != agent.next_u64());
}
