#pragma once

#include <array>
#include <functional>
#include <limits>
#include <numbers>
#include <span>

namespace linnik {

namespace constants {
inline constexpr double euler_gamma = 0.5772156649015328606065;
inline constexpr double zeta3 = 1.2020569031595942854;
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

/// Tolerances for the adaptive integrators. The requested accuracy is
/// max(abs_tolerance, rel_tolerance * |I|).
struct QuadratureSpec {
  double abs_tolerance = 1e-10;
  double rel_tolerance = 1e-8;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

using RealFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b]. Interior
/// breakpoints (ignored if outside (a, b)) seed the initial partition.
QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec = {},
                           std::span<const double> breakpoints = {});

/// Integral of f over (0, inf) through y = t / (1 - t). Breakpoints are given
/// in y and are mapped onto (0, 1) before adaptation.
QuadratureResult integrate_semi_infinite_detailed(const RealFn& f, const QuadratureSpec& spec = {},
                                                  std::span<const double> breakpoints = {});

double integrate_semi_infinite(const RealFn& f, const QuadratureSpec& spec = {},
                               std::span<const double> breakpoints = {});

/// Lanczos approximation (g = 7) with reflection below 1/2.
double gamma_function(double x);

/// Standard normal quantile; Acklam's rational approximation polished by one
/// Halley step against erfc. Accurate to ~1e-15 away from the extreme tails.
double normal_quantile(double p);

/// Brent's method on a sign-changing bracket. Terminates when the bracket is
/// narrower than tol (or an exact zero is hit).
double solve_1d(const RealFn& f, double lo, double hi, double tol = 1e-12);

using Vec2 = std::array<double, 2>;
using Fn2 = std::function<Vec2(const Vec2&)>;

struct Box2 {
  Vec2 lower{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Vec2 upper{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

  bool contains(const Vec2& p) const {
    return p[0] >= lower[0] && p[0] <= upper[0] && p[1] >= lower[1] && p[1] <= upper[1];
  }
  Vec2 project(const Vec2& p) const;
};

struct Solve2dResult {
  Vec2 root{};
  int iterations = 0;
  double residual = 0.0;  // max-norm of F at root
};

/// Damped Newton with a central-difference Jacobian. Iterates are projected
/// back into `bounds`; a backtracking line search on |F|^2 keeps the iteration
/// monotone.
Solve2dResult solve_2d_detailed(const Fn2& F, Vec2 start, const Box2& bounds = {}, double tol = 1e-10,
                                int max_iterations = 200);

Vec2 solve_2d(const Fn2& F, Vec2 start, const Box2& bounds = {}, double tol = 1e-10, int max_iterations = 200);

}  // namespace linnik
