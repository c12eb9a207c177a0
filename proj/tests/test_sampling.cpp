#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "linnik/distribution.hpp"
#include "linnik/error.hpp"
#include "linnik/rng.hpp"
#include "linnik/sampling.hpp"
#include "oracles.hpp"

using namespace linnik;

namespace {

constexpr double kEuler = 0.5772156649015329;

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

template <class F>
double mean_of(const std::vector<double>& v, F&& f) {
  double s = 0.0;
  for (double x : v) s += f(x);
  return s / v.size();
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

// cdf of the standard law tabulated on a log grid in |x| and interpolated in log|x|
class CdfTable {
 public:
  explicit CdfTable(double alpha) {
    for (int i = 0; i <= kPoints; ++i) {
      const double lx = kLo + (kHi - kLo) * i / kPoints;
      tail_.push_back(1.0 - cdf({alpha, 1.0}, std::exp(lx)));
    }
  }

  double operator()(double x) const {
    const double ax = std::abs(x);
    double upper;
    if (ax == 0.0) {
      upper = 0.5;
    } else {
      const double pos = (std::log(ax) - kLo) / (kHi - kLo) * kPoints;
      if (pos <= 0.0) upper = tail_.front();
      else if (pos >= kPoints) upper = tail_.back();
      else {
        const int i = static_cast<int>(pos);
        const double w = pos - i;
        upper = (1.0 - w) * tail_[i] + w * tail_[i + 1];
      }
    }
    return x < 0 ? upper : 1.0 - upper;
  }

 private:
  static constexpr int kPoints = 2400;
  static constexpr double kLo = -12.0 * std::numbers::ln10;
  static constexpr double kHi = 12.0 * std::numbers::ln10;
  std::vector<double> tail_;
};

}  // namespace

TEST_CASE("philox known answers") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter rng") {
  CounterRng a({42, 3}), b({42, 3}), c({42, 4}), d({43, 3});
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 1000; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  CHECK(a.position() == 1000);

  // outputs are addressed by block: the third word comes from block 1
  const auto blk = philox4x32({1, 0, 3, 0}, {42, 0});
  CHECK(va[2] == (static_cast<std::uint64_t>(blk[0]) | static_cast<std::uint64_t>(blk[1]) << 32));

  CounterRng u({7, 0});
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    const double x = u.uniform_open();
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(mix64(0) != mix64(1));
  static_assert(mix64(1) == mix64(1));
}

TEST_CASE("determinism and stream separation") {
  const LinnikParams p{1.3, 2.0};
  const auto s1 = sample_linnik({11, 5}, p, 1000);
  const auto s2 = sample_linnik({11, 5}, p, 1000);
  const auto s3 = sample_linnik({11, 6}, p, 1000);
  CHECK(s1.values == s2.values);
  CHECK(s1.values != s3.values);
  REQUIRE(s1.params_true);
  CHECK(*s1.params_true == p);
  REQUIRE(s1.seed_info);
  CHECK(*s1.seed_info == RngStream{11, 5});
  // a prefix of a longer draw is the shorter draw
  const auto s4 = sample_linnik({11, 5}, p, 10);
  CHECK(std::equal(s4.values.begin(), s4.values.end(), s1.values.begin()));

  CHECK_THROWS_AS(sample_linnik({1, 1}, {0.0, 1.0}, 10), Error);
  CHECK_THROWS_AS(sample_exponential({1, 1}, 0), Error);
  CHECK_THROWS_AS(sample_symmetric_stable({1, 1}, 2.5, 10), Error);
}

TEST_CASE("exponential variates") {
  const auto z = sample_exponential({2024, 1}, 1'000'000).values;
  CHECK(std::abs(mean(z) - 1.0) < 5e-3);
  CHECK(std::abs(variance(z) - 1.0) < 1e-2);
  CHECK(std::abs(mean_of(z, [](double x) { return std::log(x); }) + kEuler) < 4e-3);
  CHECK(*std::min_element(z.begin(), z.end()) > 0.0);
}

TEST_CASE("symmetric stable variates") {
  const auto s2 = sample_symmetric_stable({2024, 2}, 2.0, 1'000'000).values;
  CHECK(std::abs(variance(s2) - 2.0) < 2e-2);
  const auto s1 = sample_symmetric_stable({2024, 3}, 1.0, 1'000'000).values;
  CHECK(std::abs(median(s1)) < 5e-3);
  const auto s15 = sample_symmetric_stable({2024, 4}, 1.5, 1'000'000).values;
  CHECK(std::abs(mean_of(s15, [](double x) { return std::log(std::abs(x)); }) + kEuler / 3.0) < 6e-3);
  // second log-moment against the closed form
  const auto lm = stable_log_moments(1.5);
  const double e2 = mean_of(s15, [](double x) { return std::pow(std::log(std::abs(x)), 2); });
  CHECK(std::abs(e2 - lm.m2) < 4.0 * std::sqrt((lm.m4 - lm.m2 * lm.m2) / 1e6));
}

TEST_CASE("Laplace variates") {
  const auto d = sample_laplace({2024, 5}, 1'000'000).values;
  CHECK(std::abs(mean(d)) < 5e-3);
  CHECK(std::abs(mean_of(d, [](double x) { return std::abs(x); }) - 1.0) < 5e-3);
  CHECK(std::abs(variance(d) - 2.0) < 2e-2);
}

TEST_CASE("Linnik variates: moment examples") {
  const std::size_t n = 1'000'000;
  const auto l2 = sample_linnik({2024, 6}, {2.0, 1.0}, n).values;
  CHECK(std::abs(variance(l2) - 2.0) < 2e-2);

  const auto l15 = sample_linnik({2024, 7}, {1.5, 1.0}, n).values;
  const auto th = log_moment_theory({1.5, 1.0});
  CHECK(std::abs(mean_of(l15, [](double x) { return std::log(std::abs(x)); }) - th.mean_logabs) <
        3.0 * std::sqrt(th.var_logabs / n));

  const auto l1 = sample_linnik({2024, 8}, {1.0, 0.2}, n).values;
  CHECK(std::abs(mean_of(l1, [](double x) { return std::cos(x); }) - 1.0 / 1.2) < 3.0 / std::sqrt(double(n)));
}

TEST_CASE("Linnik variates: log-moments within 4 standard errors") {
  const std::size_t n = 1'000'000;
  const LinnikParams grid[] = {{0.3, 0.5}, {0.5, 2.0}, {1.0, 0.2}, {1.5, 1.0}, {1.9, 10.0}, {2.0, 0.1}};
  std::uint64_t stream = 100;
  for (const auto& p : grid) {
    CAPTURE(p.alpha);
    const auto x = sample_linnik({77, stream++}, p, n).values;
    std::vector<double> lg(n);
    std::transform(x.begin(), x.end(), lg.begin(), [](double v) { return std::log(std::abs(v)); });
    const auto th = log_moment_theory(p);
    const double m = mean(lg);
    double v = 0.0;
    for (double y : lg) v += (y - m) * (y - m);
    v /= n;
    CHECK(std::abs(m - th.mean_logabs) < 4.0 * std::sqrt(th.var_logabs / n));
    CHECK(std::abs(v - th.var_logabs) < 4.0 * std::sqrt((th.mu4 - th.var_logabs * th.var_logabs) / n));
  }
}

TEST_CASE("Linnik variates: Kolmogorov-Smirnov against the cdf") {
  const std::size_t n = 100'000;
  const double critical = oracle::kKsCritical001 / std::sqrt(double(n));
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    CAPTURE(a);
    const CdfTable table(a);
    int passed = 0;
    for (std::uint64_t run = 0; run < 100; ++run) {
      const auto s = sample_linnik({900 + run, 1}, {a, 1.0}, n);
      if (oracle::ks_statistic(s.values, table) < critical) ++passed;
    }
    CHECK(passed >= 95);
  }
}

TEST_CASE("two routes agree at alpha 2") {
  const std::size_t n = 100'000;
  const double gamma = 1.7;
  const double critical = oracle::kKsCritical001 * std::sqrt(2.0 / n);
  int passed = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto l = sample_linnik({5000 + run, 1}, {2.0, gamma}, n).values;
    auto d = sample_laplace({5000 + run, 2}, n).values;
    for (double& v : d) v *= gamma;
    if (oracle::ks_two_sample(l, d) < critical) ++passed;
  }
  CHECK(passed >= 95);
}

TEST_CASE("sample files round trip") {
  for (std::uint64_t seed : {0ull, 1ull, 123456789ull, ~0ull}) {
    const auto s = sample_linnik({seed, seed ^ 5}, {0.7, 3.25}, 500);
    std::stringstream io;
    write_sample(io, s);
    const auto back = read_sample(io);
    CHECK(back.values == s.values);
    REQUIRE(back.params_true);
    CHECK(*back.params_true == *s.params_true);
    REQUIRE(back.seed_info);
    CHECK(*back.seed_info == *s.seed_info);
  }

  Sample bare;
  bare.values = {1.0, -2.5, 1e-300, 3.0e300};
  std::stringstream io;
  write_sample(io, bare);
  CHECK(io.str() == "1\n-2.5\n1e-300\n3.0000000000000002e+300\n");
  const auto back = read_sample(io);
  CHECK(back.values == bare.values);
  CHECK(!back.params_true);
  CHECK(!back.seed_info);
}

TEST_CASE("reading sample files") {
  std::istringstream ok("# comment only\n\n  1.5\n-2\r\n+3e0\n# alpha=1 gamma=2\n");
  const auto s = read_sample(ok);
  CHECK(s.values == std::vector<double>{1.5, -2.0, 3.0});
  REQUIRE(s.params_true);
  CHECK(*s.params_true == LinnikParams{1.0, 2.0});

  for (const char* bad : {"", "# nothing\n", "1\nabc\n", "1\ninf\n", "nan\n", "1 2\n", "# seed=x\n1\n"}) {
    CAPTURE(bad);
    std::istringstream in(bad);
    try {
      read_sample(in);
      FAIL("accepted a malformed file");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidInput);
    }
  }
}
