#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sdefit/rng.hpp"

using sdefit::RngStream;

TEST_CASE("equal seed and stream id reproduce the same sequence") {
  RngStream a = RngStream::create(42, 0);
  RngStream b = RngStream::create(42, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("mixed draw sequences are reproducible bitwise") {
  auto run = [] {
    RngStream s = RngStream::create(123456789, 7);
    std::vector<double> out;
    for (int i = 0; i < 200; ++i) {
      out.push_back(s.uniform(-2.0, 3.0));
      out.push_back(s.normal(1.0, 0.5));
      out.push_back(s.next_double());
    }
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("different stream ids give different sequences") {
  RngStream a = RngStream::create(42, 0);
  RngStream b = RngStream::create(42, 1);
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i)
    if (a.uniform(0.0, 1.0) != b.uniform(0.0, 1.0)) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("split children are independent of the parent") {
  RngStream parent = RngStream::create(5, 0);
  RngStream child = parent.split(1);
  bool any_diff = false;
  for (int i = 0; i < 1000; ++i)
    if (parent.next_u64() != child.next_u64()) any_diff = true;
  CHECK(any_diff);
}

TEST_CASE("uniform honors its interval contract") {
  RngStream s = RngStream::create(7, 0);
  CHECK(s.uniform(3.0, 3.0) == 3.0);
  CHECK_THROWS_AS(s.uniform(1.0, 0.0), std::invalid_argument);

  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(0.0, 5.0);
    CHECK(u >= 0.0);
    CHECK(u < 5.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 2.5) < 0.05);
}

TEST_CASE("uniform(0,1) mean approaches one half") {
  RngStream s = RngStream::create(7, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += s.uniform(0.0, 1.0);
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("normal honors its parameter contract") {
  RngStream s = RngStream::create(11, 0);
  CHECK(s.normal(5.0, 0.0) == 5.0);
  CHECK_THROWS_AS(s.normal(0.0, -1.0), std::invalid_argument);
}

TEST_CASE("standard normal sample variance is near one") {
  RngStream s = RngStream::create(13, 0);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal(0.0, 1.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("uniform draws pass a Kolmogorov-Smirnov check") {
  RngStream s = RngStream::create(17, 0);
  const int n = 10000;
  std::vector<double> u(n);
  for (auto& v : u) v = s.uniform(0.0, 1.0);
  std::sort(u.begin(), u.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = u[i];
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  // 1% critical value of the one-sample KS statistic, large-n form.
  CHECK(d < 1.6276 / std::sqrt(static_cast<double>(n)));
}
