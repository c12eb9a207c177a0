#pragma once

#include "linnik/numerics.hpp"

namespace linnik {

/// Index alpha in (0, 2] and scale gamma > 0 of the symmetric Linnik law with
/// characteristic function (1 + |gamma * lambda|^alpha)^-1.
struct LinnikParams {
  double alpha = 2.0;
  double gamma = 1.0;

  /// Throws InvalidParams with "alpha must be in (0,2]" or "gamma must be > 0".
  void validate() const;
  bool operator==(const LinnikParams&) const = default;
};

/// Moments of log|L|: mean, variance and third/fourth central moments.
struct LogMomentTheory {
  double mean_logabs = 0.0;
  double var_logabs = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
};

/// Raw moments E(S')^k, k = 1..4, of S' = log|S| for the standard symmetric
/// alpha-stable S with characteristic function exp(-|lambda|^alpha).
struct StableLogMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

/// Quadrature settings used by pdf/cdf; relative accuracy 1e-8 by default.
QuadratureSpec default_distribution_quadrature();

double chf(const LinnikParams& params, double lambda);

/// Density. Returns +infinity at x = 0 when alpha <= 1 (the density is
/// unbounded at the origin there); alpha = 2 uses the closed Laplace form.
double pdf(const LinnikParams& params, double x, const QuadratureSpec& spec = default_distribution_quadrature());

double cdf(const LinnikParams& params, double x, const QuadratureSpec& spec = default_distribution_quadrature());

/// E|L|^q for 0 < q < alpha. Throws MomentDoesNotExist when q >= alpha.
double fractional_moment(const LinnikParams& params, double q);

/// E|L|^q / gamma^q for any alpha > 1 when q = 1, or any alpha > q otherwise;
/// no range validation of alpha against (0, 2]. The fractional-moment
/// estimator searches slightly beyond alpha = 2 and needs the analytic form.
double fractional_moment_factor(double alpha, double q);

LogMomentTheory log_moment_theory(const LinnikParams& params);

StableLogMoments stable_log_moments(double alpha);

}  // namespace linnik
