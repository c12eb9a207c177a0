#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "linnik/distribution.hpp"
#include "linnik/error.hpp"
#include "linnik/numerics.hpp"
#include "oracles.hpp"

using namespace linnik;

namespace {

// Simpson on the mapped variable t in (0,1), y = t/(1-t); the endpoints are
// nudged inward so integrands with 0*inf limits stay finite.
double simpson_semi_infinite(const RealFn& f, long points = 1'000'000) {
  auto g = [&](double t) {
    if (t <= 0.0) t = 1e-15;
    if (t >= 1.0) t = 1.0 - 1e-15;
    const double s = 1.0 - t;
    return f(t / s) / (s * s);
  };
  return oracle::simpson(g, 0.0, 1.0, points);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected linnik::Error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("constants") {
  CHECK(constants::euler_gamma == doctest::Approx(0.5772156649015328606065).epsilon(1e-18));
  CHECK(std::abs(constants::euler_gamma - 0.5772156649015328606065) < 1e-18);
  CHECK(std::abs(constants::zeta3 - 1.2020569031595942854) < 1e-16);
}

TEST_CASE("semi-infinite quadrature examples") {
  CHECK(std::abs(integrate_semi_infinite([](double y) { return std::exp(-y); }) - 1.0) < 1e-10);
  CHECK(std::abs(integrate_semi_infinite([](double y) { return y * std::exp(-y); }) - 1.0) < 1e-10);

  const double theta = 0.75 * std::numbers::pi;
  auto f = [&](double y) { return 1.0 / (y * y + 2.0 * y * std::cos(theta) + 1.0); };
  const double closed = theta / std::sin(theta);
  CHECK(closed == doctest::Approx(3.33216).epsilon(1e-5));

  // the closed form is itself checked against an independent trapezoid rule
  auto mapped = [&](double t) {
    const double s = 1.0 - t;
    return t >= 1.0 ? 1.0 : f(t / s) / (s * s);
  };
  CHECK(oracle::trapezoid(mapped, 0.0, 1.0, 2'000'000) == doctest::Approx(closed).epsilon(1e-9));

  const double q = integrate_semi_infinite(f);
  CHECK(std::abs(q - closed) <= 1e-8 * closed);
}

TEST_CASE("quadrature agrees with a Simpson oracle") {
  const std::vector<RealFn> cases = {
      [](double y) { return std::exp(-y) * std::cos(y); },
      [](double y) { return 1.0 / (1.0 + y * y * y); },
      [](double y) { return std::pow(y, 1.5) * std::exp(-2.0 * y) / (y * y + 0.1 * y + 1.0); },
      [](double y) { return std::exp(-y * y) * std::sqrt(y); },
  };
  for (const auto& f : cases) {
    const double ours = integrate_semi_infinite(f);
    const double ref = simpson_semi_infinite(f);
    CHECK(std::abs(ours - ref) <= 1e-6 * std::abs(ref));
  }
}

TEST_CASE("sharp interior peak") {
  // Lorentzian of half-width 1e-3 centred at y = 1
  const double eps = 1e-3;
  auto f = [&](double y) { return 1.0 / ((y - 1.0) * (y - 1.0) + eps * eps); };
  const double exact = (0.5 * std::numbers::pi + std::atan(1.0 / eps)) / eps;
  const QuadratureSpec spec{1e-10, 1e-9, 4000};
  CHECK(integrate_semi_infinite(f, spec) == doctest::Approx(exact).epsilon(1e-8));
  const double bp[] = {1.0};
  const auto r = integrate_semi_infinite_detailed(f, spec, bp);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-8));
  CHECK(r.error <= 1e-9 * std::abs(r.value));
}

TEST_CASE("finite interval quadrature") {
  const auto r = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.error <= 1e-8 * 2.0);
  CHECK(integrate([](double x) { return x; }, 1.0, 1.0).value == 0.0);
  CHECK(code_of([] { integrate([](double x) { return x; }, 1.0, 0.0); }) == ErrorCode::InvalidInput);
}

TEST_CASE("quadrature errors") {
  CHECK(code_of([] { integrate_semi_infinite([](double) { return 1.0; }, {0.0, 1e-8, 10}); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] { integrate_semi_infinite([](double) { return 1.0; }, {1e-10, -1.0, 10}); }) ==
        ErrorCode::InvalidInput);
  CHECK(code_of([] { integrate_semi_infinite([](double) { return 1.0; }, {1e-10, 1e-8, 0}); }) ==
        ErrorCode::InvalidInput);
  // divergent integrand: the error estimate never settles
  CHECK(code_of([] { integrate_semi_infinite([](double y) { return 1.0 / (1.0 + y); }, {1e-12, 1e-12, 50}); }) ==
        ErrorCode::NonConvergence);
  CHECK(code_of([] { integrate([](double) { return std::nan(""); }, 0.0, 1.0); }) == ErrorCode::NonConvergence);
}

TEST_CASE("gamma function") {
  CHECK(gamma_function(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_function(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_function(1.5) == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_function(1.5) == doctest::Approx(0.8862269255).epsilon(1e-10));

  for (int i = 1; i <= 19; ++i) {
    const double x = 0.1 * i;
    const double lhs = gamma_function(x + 1.0);
    const double rhs = x * gamma_function(x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
  }
  for (double x = 0.01; x <= 3.0; x += 0.0137) CHECK(std::abs(gamma_function(x) / std::tgamma(x) - 1.0) < 1e-12);
  CHECK(gamma_function(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-13));

  for (double x : {0.0, -1.0, -2.0, -7.0}) CHECK(code_of([x] { gamma_function(x); }) == ErrorCode::PoleError);
}

TEST_CASE("normal quantile") {
  CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-13);
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(std::abs(normal_quantile(0.995) - 2.5758293035489004) < 1e-12);
  CHECK(normal_quantile(0.1) == doctest::Approx(-normal_quantile(0.9)).epsilon(1e-14));
  CHECK(code_of([] { normal_quantile(0.0); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] { normal_quantile(1.0); }) == ErrorCode::InvalidInput);
}

TEST_CASE("solve_1d") {
  CHECK(solve_1d([](double x) { return x - 2.0; }, 0.0, 5.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(solve_1d([](double x) { return x * x - 2.0; }, 0.0, 2.0) - std::sqrt(2.0)) < 1e-10);
  auto g = [](double a) { return 2.0 / (a * std::sin(std::numbers::pi / a)) - 1.0; };
  CHECK(solve_1d(g, 1.01, 2.0) == doctest::Approx(2.0).epsilon(1e-10));

  CHECK(code_of([] { solve_1d([](double x) { return x * x + 1.0; }, -1.0, 1.0); }) == ErrorCode::NoSignChange);

  // residual property over a family of problems
  const std::vector<std::pair<RealFn, std::pair<double, double>>> problems = {
      {[](double x) { return std::cos(x) - x; }, {0.0, 1.0}},
      {[](double x) { return std::exp(x) - 10.0; }, {0.0, 5.0}},
      {[](double x) { return std::pow(x, 3) - 2.0 * x - 5.0; }, {2.0, 3.0}},
      {[](double x) { return std::atan(x - 0.3); }, {-10.0, 10.0}},
      {[](double x) { return std::log(x); }, {0.1, 7.0}},
  };
  for (const auto& [f, br] : problems) {
    const double r = solve_1d(f, br.first, br.second);
    const double h = 1e-6;
    const double slope = std::abs(f(r + h) - f(r - h)) / (2.0 * h);
    CHECK(std::abs(f(r)) <= 1e-9 * (1.0 + slope));
  }
}

TEST_CASE("solve_2d") {
  const Vec2 a = solve_2d([](const Vec2& p) { return Vec2{p[0] - 1.0, p[1] - 3.0}; }, {0.0, 0.0});
  CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(a[1] == doctest::Approx(3.0).epsilon(1e-10));

  const Box2 box{{0.0, 0.0}, {5.0, 10.0}};
  const auto b = solve_2d_detailed([](const Vec2& p) { return Vec2{p[0] * p[0] - p[1], p[1] - 4.0}; }, {1.0, 1.0}, box);
  CHECK(b.root[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(b.root[1] == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(b.residual <= 1e-10);

  // no root anywhere
  CHECK(code_of([] { solve_2d([](const Vec2& p) { return Vec2{p[0] * p[0] + 1.0, p[1]}; }, {0.5, 0.5}); }) ==
        ErrorCode::NonConvergence);
  // F undefined at the start
  CHECK(code_of([] { solve_2d([](const Vec2& p) { return Vec2{std::log(p[0]), p[1]}; }, {-1.0, 0.0}); }) ==
        ErrorCode::OutOfDomain);
}

TEST_CASE("solve_2d on the fractional-moment system") {
  // population moments of |L|^0.5 and |L| at (1.5, 1)
  const LinnikParams truth{1.5, 1.0};
  const double m1 = fractional_moment(truth, 0.5);
  const double m2 = fractional_moment(truth, 1.0);
  auto F = [&](const Vec2& p) {
    const double alpha = std::exp(p[0]), gamma = std::exp(p[1]);
    return Vec2{std::log(std::pow(gamma, 0.5) * fractional_moment_factor(alpha, 0.5) / m1),
                std::log(gamma * fractional_moment_factor(alpha, 1.0) / m2)};
  };
  const Box2 box{{std::log(1.0 + 1e-6), -30.0}, {std::log(2.5), 30.0}};
  const Vec2 r = solve_2d(F, {std::log(1.3), std::log(0.8)}, box, 1e-13);
  CHECK(std::abs(std::exp(r[0]) - 1.5) < 1e-8);
  CHECK(std::abs(std::exp(r[1]) - 1.0) < 1e-8);
}
