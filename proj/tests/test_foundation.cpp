#include <doctest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "corex/error.hpp"
#include "corex/parallel.hpp"
#include "corex/rng.hpp"

using namespace corex;

TEST_CASE("derived seeds are stable and distinct per stream") {
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(42, s));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(1, 0) != derive_seed(0, 1));
}

TEST_CASE("counter rng is reproducible and uniform draws lie in [0,1)") {
  CounterRng a(9, 4), b(9, 4), c(9, 5);
  bool differs = false;
  for (int k = 0; k < 1000; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs |= x != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("counter rng uniform mean and variance") {
  CounterRng rng(123, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = rng.uniform();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  // 6 standard errors of the mean of U(0,1).
  CHECK(std::abs(mean - 0.5) < 6.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(sq / n - mean * mean - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("parallel_for covers every index exactly once for any thread count") {
  for (std::size_t threads : {1, 2, 3, 8}) {
    set_thread_count(threads);
    for (std::size_t n : {0, 1, 5, 1000}) {
      std::vector<std::atomic<int>> hits(n);
      parallel_for(n, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) hits[i]++;
      });
      for (auto& h : hits) CHECK(h.load() == 1);
    }
  }
  set_thread_count(1);
}

TEST_CASE("parallel_for rethrows worker exceptions and allows nesting") {
  set_thread_count(4);
  CHECK_THROWS_AS(parallel_for(100,
                               [](std::size_t b, std::size_t) {
                                 if (b > 0) throw DomainError("boom");
                               }),
                  DomainError);
  std::atomic<int> total{0};
  parallel_for(8, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      parallel_for(10, [&](std::size_t b2, std::size_t e2) { total += static_cast<int>(e2 - b2); });
    }
  });
  CHECK(total.load() == 80);
  set_thread_count(1);
}

TEST_CASE("error kinds survive slicing to the base class") {
  try {
    throw ParseError(12, "bad token");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parse);
    CHECK(std::string(e.what()).find("line 12") != std::string::npos);
  }
  ConvergenceError ce("stalled", 0.5);
  CHECK(ce.residual() == doctest::Approx(0.5));
}
