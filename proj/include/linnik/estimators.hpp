#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linnik/distribution.hpp"
#include "linnik/sampling.hpp"

namespace linnik {

enum class Method { MoM, FracMoment, CharFn };

std::string_view to_string(Method method);
Method method_from_string(std::string_view name);  // accepts MoM/mom, FracMoment/frac, CharFn/cf

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
};

struct EstimateResult {
  double alpha_hat = 0.0;
  double gamma_hat = 0.0;
  Method method = Method::MoM;
  std::size_t n = 0;
  std::optional<double> stderr_alpha;
  std::optional<double> stderr_gamma;
  std::optional<Interval> ci_alpha;
  std::optional<Interval> ci_gamma;
  std::optional<double> epsilon;  // CI miss probability
  std::map<std::string, double> diagnostics;
};

/// Mean and divisor-n variance of log|x_j|.
struct EmpiricalLogMoments {
  double mean_hat = 0.0;
  double var_hat = 0.0;
  std::size_t n = 0;
};

struct FracMomentConfig {
  double q1 = 0.5;
  double q2 = 1.0;

  void validate() const;
};

/// Log-frequency regression design for the characteristic-function
/// estimator: c is the mean of log|lambda_j| and u_j the least-squares slope
/// weights, so that sum(u) = 0 and sum(u_j log|lambda_j|) = 1.
struct CharFnConfig {
  std::vector<double> lambdas;
  double c = 0.0;
  std::vector<double> u;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct CharFnCovariance {
  Matrix2 w{};
  bool positive_semidefinite = true;
};

/// z_{eps/2}, the (1 - eps/2) standard normal quantile.
double two_sided_z(double epsilon);

EmpiricalLogMoments empirical_log_moments(std::span<const double> values);
EmpiricalLogMoments empirical_log_moments(const Sample& sample);

/// Log-moment (method of moments) estimator. alpha_hat > 2 is returned as is
/// and flagged with diagnostics["alpha_above_2"] = 1.
EstimateResult estimate_mom(const EmpiricalLogMoments& moments, std::optional<double> epsilon = std::nullopt);
EstimateResult estimate_mom(std::span<const double> values, std::optional<double> epsilon = std::nullopt);
EstimateResult estimate_mom(const Sample& sample, std::optional<double> epsilon = std::nullopt);

/// (alpha^2 (13 alpha^4 + 20 alpha^2 + 64) / 80, pi^2 gamma^2 (alpha^2 + 4) / (12 alpha^2)):
/// asymptotic variances of sqrt(n)(alpha_hat - alpha) and sqrt(n)(gamma_hat - gamma).
std::pair<double, double> mom_asymptotic_variances(const LinnikParams& params);

/// Fractional-moment estimator from the two empirical moments mean|x|^{q_j}.
/// The system is solved in (log alpha, log gamma) with alpha restricted to
/// (q2, 2.5]; `start` (alpha, gamma) defaults to (1.5, scale implied by q2).
EstimateResult estimate_frac_moment_from_moments(double moment_q1, double moment_q2, std::size_t n,
                                                 const FracMomentConfig& config,
                                                 std::optional<LinnikParams> start = std::nullopt);
EstimateResult estimate_frac_moment(std::span<const double> values, const FracMomentConfig& config = {});
EstimateResult estimate_frac_moment(const Sample& sample, const FracMomentConfig& config = {});

CharFnConfig charfn_config(std::span<const double> lambdas);

/// sqrt((sum cos(lambda x))^2 + (sum sin(lambda x))^2) / n
double empirical_chf_modulus(std::span<const double> values, double lambda);

/// Characteristic-function estimator given |psi_hat(lambda_j)| for each lambda.
EstimateResult estimate_charfn_from_chf(std::span<const double> chf_moduli, std::size_t n,
                                        const CharFnConfig& config, std::optional<double> epsilon = std::nullopt);
EstimateResult estimate_charfn(std::span<const double> values, const CharFnConfig& config,
                               std::optional<double> epsilon = std::nullopt);
EstimateResult estimate_charfn(const Sample& sample, const CharFnConfig& config,
                               std::optional<double> epsilon = std::nullopt);

/// Asymptotic covariance of sqrt(n)(alpha_P - alpha, gamma_P - gamma).
CharFnCovariance charfn_asymptotic_cov(const LinnikParams& params, const CharFnConfig& config);

}  // namespace linnik
