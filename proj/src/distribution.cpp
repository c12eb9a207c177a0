#include "linnik/distribution.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "linnik/error.hpp"

namespace linnik {

using constants::euler_gamma;
using constants::pi;
using constants::zeta3;

void LinnikParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidParams, "alpha must be in (0,2]");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::InvalidParams, "gamma must be > 0");
}

QuadratureSpec default_distribution_quadrature() {
  QuadratureSpec spec;
  spec.abs_tolerance = std::numeric_limits<double>::min();
  spec.rel_tolerance = 1e-8;
  spec.max_subdivisions = 4000;
  return spec;
}

double chf(const LinnikParams& params, double lambda) {
  params.validate();
  return 1.0 / (1.0 + std::pow(std::abs(params.gamma * lambda), params.alpha));
}

namespace {

// Both standardized integrals are evaluated after u = y^alpha, which turns
//   f(x)     = (sin(theta)/pi) int y^a e^{-xy} / (y^{2a} + 2 y^a cos(theta) + 1) dy
//   1 - F(x) = (sin(theta)/pi) int y^{a-1} e^{-xy} / (same) dy
// into (sin(theta)/(a pi)) int {u^{1/a}, 1} e^{-x u^{1/a}} / (u^2 + 2u cos(theta) + 1) du,
// theta = a pi / 2, and then v = log u. In v the integrand decays
// exponentially to the left and double-exponentially past the cutoff
// v = -a log x, so a finite window covers every x > 0 including x near 0.
enum class Kernel { Density, Tail };

double standardized_integral(double alpha, double x, Kernel kernel, const QuadratureSpec& spec) {
  const double theta = 0.5 * alpha * pi;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double inv_alpha = 1.0 / alpha;
  const double log_x = std::log(x);

  auto integrand = [=](double v) {
    // x * u^{1/alpha} = exp(log x + v / alpha)
    const double decay = std::exp(log_x + v * inv_alpha);
    const double log_numer = kernel == Kernel::Density ? v * (1.0 + inv_alpha) - decay : v - decay;
    double log_denom;
    if (v <= 0.0) {
      const double u = std::exp(v);
      log_denom = std::log((u + cos_t) * (u + cos_t) + sin_t * sin_t);
    } else {
      // u^2 (1 + 2 cos(theta)/u + 1/u^2) without overflowing u^2
      const double r = std::exp(-v);
      log_denom = 2.0 * v + std::log1p(r * (2.0 * cos_t + r));
    }
    return std::exp(log_numer - log_denom);
  };

  // features: the cutoff, and for alpha > 1 the denominator peak at
  // u = -cos(theta), sharp as alpha -> 2
  const double v_cut = -alpha * log_x;
  std::vector<double> breaks{v_cut};
  double v_lo = std::min(0.0, v_cut);
  if (cos_t < 0.0) {
    const double v_peak = std::log(-cos_t);
    breaks.push_back(v_peak);
    v_lo = std::min(v_lo, v_peak);
  }
  v_lo -= 45.0;
  // exp(-decay) underflows once decay > 745
  const double v_hi = std::max(v_cut + alpha * std::log(750.0), v_lo + 90.0);

  const double integral = integrate(integrand, v_lo, v_hi, spec, breaks).value;
  return sin_t / (alpha * pi) * integral;
}

}  // namespace

double pdf(const LinnikParams& params, double x, const QuadratureSpec& spec) {
  params.validate();
  if (std::isnan(x)) throw Error(ErrorCode::InvalidInput, "pdf: x is NaN");
  const double z = std::abs(x) / params.gamma;
  if (params.alpha == 2.0) return 0.5 * std::exp(-z) / params.gamma;
  if (std::isinf(z)) return 0.0;
  if (z == 0.0) {
    if (params.alpha <= 1.0) return std::numeric_limits<double>::infinity();
    // int_0^inf u^{1/a} / (u^2 + 2u cos(theta) + 1) du = pi / (sin(pi/a) sin(theta))
    return 1.0 / (params.alpha * std::sin(pi / params.alpha)) / params.gamma;
  }
  return standardized_integral(params.alpha, z, Kernel::Density, spec) / params.gamma;
}

double cdf(const LinnikParams& params, double x, const QuadratureSpec& spec) {
  params.validate();
  if (std::isnan(x)) throw Error(ErrorCode::InvalidInput, "cdf: x is NaN");
  const double z = std::abs(x) / params.gamma;
  if (z == 0.0) return 0.5;
  double tail;
  if (params.alpha == 2.0) {
    tail = 0.5 * std::exp(-z);
  } else if (std::isinf(z)) {
    tail = 0.0;
  } else {
    tail = standardized_integral(params.alpha, z, Kernel::Tail, spec);
  }
  return x > 0.0 ? 1.0 - tail : tail;
}

double fractional_moment_factor(double alpha, double q) {
  if (q == 1.0) return 2.0 / (alpha * std::sin(pi / alpha));
  return pi * q / (alpha * std::sin(pi * q / alpha) * std::cos(0.5 * pi * q) * gamma_function(1.0 - q));
}

double fractional_moment(const LinnikParams& params, double q) {
  params.validate();
  if (!(q > 0.0)) throw Error(ErrorCode::InvalidInput, "fractional moment order q must be > 0");
  if (q >= params.alpha)
    throw Error(ErrorCode::MomentDoesNotExist,
                "E|L|^q is infinite for q = " + std::to_string(q) + " >= alpha = " + std::to_string(params.alpha));
  return std::pow(params.gamma, q) * fractional_moment_factor(params.alpha, q);
}

LogMomentTheory log_moment_theory(const LinnikParams& params) {
  params.validate();
  const double a2 = params.alpha * params.alpha;
  const double a4 = a2 * a2;
  LogMomentTheory out;
  out.mean_logabs = std::log(params.gamma) - euler_gamma;
  out.var_logabs = pi * pi * (a2 + 4.0) / (12.0 * a2);
  out.mu3 = -2.0 * zeta3;
  out.mu4 = std::pow(pi, 4) * (19.0 * a4 + 40.0 * a2 + 112.0) / (240.0 * a4);
  return out;
}

StableLogMoments stable_log_moments(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidParams, "alpha must be in (0,2]");
  const double a = alpha;
  const double a2 = a * a;
  const double am1 = a - 1.0;
  const double C = euler_gamma;
  const double pi2 = pi * pi;

  StableLogMoments m;
  m.m1 = C * (1.0 / a - 1.0);
  m.m2 = (12.0 * C * C * am1 * am1 + (a2 + 2.0) * pi2) / (12.0 * a2);
  m.m3 = (1.0 - a) * (4.0 * am1 * am1 * C * C * C + (a2 + 2.0) * C * pi2 + 8.0 * (a2 + a + 1.0) * zeta3) /
         (4.0 * a2 * a);
  m.m4 = (240.0 * std::pow(am1, 4) * std::pow(C, 4) + 120.0 * am1 * am1 * (a2 + 2.0) * C * C * pi2 +
          (19.0 * a2 * a2 + 20.0 * a2 + 36.0) * pi2 * pi2 + 1920.0 * am1 * am1 * (a2 + a + 1.0) * C * zeta3) /
         (240.0 * a2 * a2);
  return m;
}

}  // namespace linnik
