#include "linnik/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linnik/error.hpp"
#include "linnik/numerics.hpp"

namespace linnik {

using constants::euler_gamma;
using constants::pi;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MoM: return "MoM";
    case Method::FracMoment: return "FracMoment";
    case Method::CharFn: return "CharFn";
  }
  return "Unknown";
}

Method method_from_string(std::string_view name) {
  if (name == "MoM" || name == "mom") return Method::MoM;
  if (name == "FracMoment" || name == "frac") return Method::FracMoment;
  if (name == "CharFn" || name == "cf") return Method::CharFn;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

double two_sided_z(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be in (0,1)");
  return normal_quantile(1.0 - 0.5 * epsilon);
}

namespace {

void attach_intervals(EstimateResult& r, std::optional<double> epsilon) {
  if (!epsilon) return;
  const double z = two_sided_z(*epsilon);
  r.epsilon = epsilon;
  if (r.stderr_alpha) r.ci_alpha = Interval{r.alpha_hat - z * *r.stderr_alpha, r.alpha_hat + z * *r.stderr_alpha};
  if (r.stderr_gamma) r.ci_gamma = Interval{r.gamma_hat - z * *r.stderr_gamma, r.gamma_hat + z * *r.stderr_gamma};
}

}  // namespace

// ---------------------------------------------------------------------------
// Log-moment estimator

EmpiricalLogMoments empirical_log_moments(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::TooFewObservations, "need at least 2 observations, got " + std::to_string(n));
  std::vector<double> logs(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] == 0.0)
      throw Error(ErrorCode::ZeroObservation, "observation " + std::to_string(i) + " is exactly 0");
    logs[i] = std::log(std::abs(values[i]));
    sum += logs[i];
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double l : logs) ss += (l - mean) * (l - mean);
  return {mean, ss / static_cast<double>(n), n};
}

EmpiricalLogMoments empirical_log_moments(const Sample& sample) { return empirical_log_moments(sample.values); }

EstimateResult estimate_mom(const EmpiricalLogMoments& m, std::optional<double> epsilon) {
  constexpr double floor = pi * pi / 12.0;
  if (!(m.var_hat > floor))
    throw Error(ErrorCode::VarianceTooSmall, "variance of log|x| (" + std::to_string(m.var_hat) +
                                                 ") must exceed pi^2/12; alpha is not identifiable");
  EstimateResult r;
  r.method = Method::MoM;
  r.n = m.n;
  r.alpha_hat = pi / std::sqrt(3.0 * (m.var_hat - floor));
  r.gamma_hat = std::exp(m.mean_hat + euler_gamma);
  if (r.alpha_hat > 2.0) r.diagnostics["alpha_above_2"] = 1.0;

  if (m.n > 0) {
    const double a2 = r.alpha_hat * r.alpha_hat;
    const double n = static_cast<double>(m.n);
    r.stderr_alpha = std::sqrt(a2 * (13.0 * a2 * a2 + 20.0 * a2 + 64.0) / (80.0 * n));
    r.stderr_gamma = std::sqrt(pi * pi * r.gamma_hat * r.gamma_hat * (a2 + 4.0) / (12.0 * a2 * n));
  }
  attach_intervals(r, epsilon);
  return r;
}

EstimateResult estimate_mom(std::span<const double> values, std::optional<double> epsilon) {
  return estimate_mom(empirical_log_moments(values), epsilon);
}

EstimateResult estimate_mom(const Sample& sample, std::optional<double> epsilon) {
  return estimate_mom(empirical_log_moments(sample), epsilon);
}

std::pair<double, double> mom_asymptotic_variances(const LinnikParams& params) {
  params.validate();
  const double a2 = params.alpha * params.alpha;
  const double g2 = params.gamma * params.gamma;
  return {a2 * (13.0 * a2 * a2 + 20.0 * a2 + 64.0) / 80.0, pi * pi * g2 * (a2 + 4.0) / (12.0 * a2)};
}

// ---------------------------------------------------------------------------
// Fractional-moment estimator

void FracMomentConfig::validate() const {
  if (!(q1 > 0.0 && q1 < q2) || !std::isfinite(q2))
    throw Error(ErrorCode::InvalidConfig, "fractional moment orders must satisfy 0 < q1 < q2");
  if (q2 >= 2.0) throw Error(ErrorCode::InvalidConfig, "q2 must be below 2 (moments of order >= alpha diverge)");
}

namespace {

constexpr double kFracAlphaMargin = 1e-6;
constexpr double kFracAlphaMax = 2.5;
constexpr double kFracTolerance = 1e-12;

double log_factor(double alpha, double q) { return std::log(fractional_moment_factor(alpha, q)); }

}  // namespace

EstimateResult estimate_frac_moment_from_moments(double moment_q1, double moment_q2, std::size_t n,
                                                 const FracMomentConfig& config, std::optional<LinnikParams> start) {
  config.validate();
  if (!(moment_q1 > 0.0) || !(moment_q2 > 0.0) || !std::isfinite(moment_q1) || !std::isfinite(moment_q2))
    throw Error(ErrorCode::SolverFailed, "empirical fractional moments must be positive and finite");

  const double q1 = config.q1, q2 = config.q2;
  const double log_m1 = std::log(moment_q1), log_m2 = std::log(moment_q2);
  const double alpha_lo = q2 + kFracAlphaMargin;

  // x = (log alpha, log gamma); residuals are log-moment mismatches
  auto residual = [&](const Vec2& x) -> Vec2 {
    const double alpha = std::exp(x[0]);
    return {log_m1 - q1 * x[1] - log_factor(alpha, q1), log_m2 - q2 * x[1] - log_factor(alpha, q2)};
  };
  auto log_gamma_at = [&](double alpha) { return (log_m2 - log_factor(alpha, q2)) / q2; };

  double alpha0 = start ? start->alpha : 1.5;
  alpha0 = std::clamp(alpha0, alpha_lo + 1e-3, kFracAlphaMax - 1e-3);
  const double log_gamma0 = start ? std::log(start->gamma) : log_gamma_at(alpha0);

  Box2 box;
  box.lower = {std::log(alpha_lo), log_gamma0 - 60.0};
  box.upper = {std::log(kFracAlphaMax), log_gamma0 + 60.0};

  EstimateResult r;
  r.method = Method::FracMoment;
  r.n = n;
  bool solved = false;
  try {
    const auto sol = solve_2d_detailed(residual, {std::log(alpha0), log_gamma0}, box, kFracTolerance);
    r.alpha_hat = std::exp(sol.root[0]);
    r.gamma_hat = std::exp(sol.root[1]);
    r.diagnostics["solver_iterations"] = sol.iterations;
    solved = true;
  } catch (const Error&) {
    solved = false;
  }

  if (!solved) {
    // gamma enters both equations as gamma^{q_j}; eliminating it leaves a
    // bracketed scalar equation in alpha
    auto reduced = [&](double alpha) {
      return (log_m1 - log_factor(alpha, q1)) / q1 - (log_m2 - log_factor(alpha, q2)) / q2;
    };
    try {
      const double alpha = solve_1d(reduced, alpha_lo, kFracAlphaMax, 1e-14);
      r.alpha_hat = alpha;
      r.gamma_hat = std::exp(log_gamma_at(alpha));
      r.diagnostics["fallback_1d"] = 1.0;
    } catch (const Error& e) {
      throw Error(ErrorCode::SolverFailed, "no root of the fractional-moment system with alpha in (" +
                                               std::to_string(q2) + ", " + std::to_string(kFracAlphaMax) +
                                               "]: " + e.what());
    }
  }
  if (r.alpha_hat > 2.0) r.diagnostics["alpha_above_2"] = 1.0;
  return r;
}

EstimateResult estimate_frac_moment(std::span<const double> values, const FracMomentConfig& config) {
  config.validate();
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::TooFewObservations, "need at least 2 observations, got " + std::to_string(n));
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::abs(values[i]);
    if (a == 0.0) throw Error(ErrorCode::ZeroObservation, "observation " + std::to_string(i) + " is exactly 0");
    s1 += std::pow(a, config.q1);
    s2 += config.q2 == 1.0 ? a : std::pow(a, config.q2);
  }
  const double m1 = s1 / static_cast<double>(n), m2 = s2 / static_cast<double>(n);

  std::optional<LinnikParams> start;
  try {
    const auto mom = estimate_mom(values);
    start = LinnikParams{mom.alpha_hat, mom.gamma_hat};
  } catch (const Error&) {
  }
  return estimate_frac_moment_from_moments(m1, m2, n, config, start);
}

EstimateResult estimate_frac_moment(const Sample& sample, const FracMomentConfig& config) {
  return estimate_frac_moment(sample.values, config);
}

// ---------------------------------------------------------------------------
// Characteristic-function estimator

CharFnConfig charfn_config(std::span<const double> lambdas) {
  const std::size_t b = lambdas.size();
  if (b < 2) throw Error(ErrorCode::InvalidConfig, "need at least two lambda values");
  CharFnConfig cfg;
  cfg.lambdas.assign(lambdas.begin(), lambdas.end());
  std::vector<double> logs(b);
  for (std::size_t j = 0; j < b; ++j) {
    if (lambdas[j] == 0.0 || !std::isfinite(lambdas[j]))
      throw Error(ErrorCode::InvalidConfig, "lambda values must be finite and nonzero");
    logs[j] = std::log(std::abs(lambdas[j]));
    cfg.c += logs[j];
  }
  cfg.c /= static_cast<double>(b);
  double spread = 0.0;
  for (double l : logs) spread += (l - cfg.c) * (l - cfg.c);
  if (!(spread > 0.0)) throw Error(ErrorCode::DegenerateLambdas, "all |lambda_j| are equal");
  cfg.u.resize(b);
  for (std::size_t j = 0; j < b; ++j) cfg.u[j] = (logs[j] - cfg.c) / spread;
  return cfg;
}

double empirical_chf_modulus(std::span<const double> values, double lambda) {
  if (values.empty()) throw Error(ErrorCode::TooFewObservations, "empty sample");
  double sc = 0.0, ss = 0.0;
  for (double x : values) {
    sc += std::cos(lambda * x);
    ss += std::sin(lambda * x);
  }
  return std::hypot(sc, ss) / static_cast<double>(values.size());
}

namespace {

CharFnCovariance charfn_cov_unchecked(double alpha, double gamma, const CharFnConfig& config) {
  const std::size_t b = config.lambdas.size();
  auto psi = [&](double lambda) { return 1.0 / (1.0 + std::pow(std::abs(gamma * lambda), alpha)); };

  std::vector<double> w(b);
  for (std::size_t i = 0; i < b; ++i) {
    const double p = psi(config.lambdas[i]);
    w[i] = 1.0 / (p * p) / std::pow(std::abs(gamma * config.lambdas[i]), alpha);
  }
  std::vector<double> big_w(b * b);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      const double li = config.lambdas[i], lj = config.lambdas[j];
      const double wij = 0.5 * (psi(li + lj) + psi(li - lj) - 2.0 * psi(li) * psi(lj));
      big_w[i * b + j] = w[i] * w[j] * wij;
    }

  const double shift = config.c + std::log(gamma);
  std::vector<double> v(b);  // 1/b - u (c + log gamma)
  for (std::size_t j = 0; j < b; ++j) v[j] = 1.0 / static_cast<double>(b) - config.u[j] * shift;

  auto quad = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) acc += x[i] * big_w[i * b + j] * y[j];
    return acc;
  };

  const double ratio = gamma / alpha;
  CharFnCovariance out;
  out.w[0][0] = quad(config.u, config.u);
  out.w[0][1] = ratio * quad(v, config.u);
  out.w[1][0] = ratio * quad(config.u, v);
  out.w[1][1] = ratio * ratio * quad(v, v);

  const auto& m = out.w;
  const double scale = std::max({std::abs(m[0][0]), std::abs(m[1][1]), 1.0});
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const bool finite = std::isfinite(m[0][0]) && std::isfinite(m[0][1]) && std::isfinite(m[1][0]) &&
                      std::isfinite(m[1][1]);
  out.positive_semidefinite = finite && std::abs(m[0][1] - m[1][0]) <= 1e-10 * scale &&
                              m[0][0] >= -1e-10 * scale && m[1][1] >= -1e-10 * scale &&
                              det >= -1e-10 * scale * scale;
  return out;
}

}  // namespace

CharFnCovariance charfn_asymptotic_cov(const LinnikParams& params, const CharFnConfig& config) {
  params.validate();
  if (config.lambdas.size() < 2 || config.u.size() != config.lambdas.size())
    throw Error(ErrorCode::InvalidConfig, "characteristic-function config is not initialized");
  return charfn_cov_unchecked(params.alpha, params.gamma, config);
}

EstimateResult estimate_charfn_from_chf(std::span<const double> chf_moduli, std::size_t n,
                                        const CharFnConfig& config, std::optional<double> epsilon) {
  const std::size_t b = config.lambdas.size();
  if (b < 2 || config.u.size() != b || chf_moduli.size() != b)
    throw Error(ErrorCode::InvalidConfig, "characteristic-function config does not match the inputs");

  double alpha = 0.0, sum_y = 0.0;
  for (std::size_t j = 0; j < b; ++j) {
    const double m = chf_moduli[j];
    if (!(m > 0.0 && m < 1.0))
      throw Error(ErrorCode::ChfOutOfRange, "|psi_hat(" + std::to_string(config.lambdas[j]) + ")| = " +
                                                std::to_string(m) + " is outside (0,1)");
    const double y = std::log(1.0 / m - 1.0);
    alpha += config.u[j] * y;
    sum_y += y;
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::ChfOutOfRange, "regression slope gives a non-positive alpha estimate");

  EstimateResult r;
  r.method = Method::CharFn;
  r.n = n;
  r.alpha_hat = alpha;
  r.gamma_hat = std::exp(sum_y / (static_cast<double>(b) * alpha) - config.c);
  if (!(r.gamma_hat > 0.0) || !std::isfinite(r.gamma_hat))
    throw Error(ErrorCode::ChfOutOfRange, "scale estimate is not a positive finite number");
  if (r.alpha_hat > 2.0) r.diagnostics["alpha_above_2"] = 1.0;

  if (n > 0) {
    const auto cov = charfn_cov_unchecked(r.alpha_hat, r.gamma_hat, config);
    if (cov.positive_semidefinite) {
      r.stderr_alpha = std::sqrt(std::max(cov.w[0][0], 0.0) / static_cast<double>(n));
      r.stderr_gamma = std::sqrt(std::max(cov.w[1][1], 0.0) / static_cast<double>(n));
    } else {
      r.diagnostics["cov_not_psd"] = 1.0;
    }
  }
  attach_intervals(r, epsilon);
  return r;
}

EstimateResult estimate_charfn(std::span<const double> values, const CharFnConfig& config,
                               std::optional<double> epsilon) {
  std::vector<double> moduli;
  moduli.reserve(config.lambdas.size());
  for (double lambda : config.lambdas) moduli.push_back(empirical_chf_modulus(values, lambda));
  return estimate_charfn_from_chf(moduli, values.size(), config, epsilon);
}

EstimateResult estimate_charfn(const Sample& sample, const CharFnConfig& config, std::optional<double> epsilon) {
  return estimate_charfn(sample.values, config, epsilon);
}

}  // namespace linnik
