#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "linnik/distribution.hpp"
#include "linnik/rng.hpp"

namespace linnik {

/// Observations plus optional provenance. Values must be finite.
struct Sample {
  std::vector<double> values;
  std::optional<LinnikParams> params_true;
  std::optional<RngStream> seed_info;

  std::size_t size() const { return values.size(); }
};

/// Chambers-Mallows-Stuck generator for the symmetric stable law with
/// characteristic function exp(-|lambda|^alpha). alpha = 1 gives tan(U) and
/// alpha = 2 a normal with variance 2.
class SymmetricStableGenerator {
 public:
  explicit SymmetricStableGenerator(double alpha);

  double operator()(CounterRng& rng) const;
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  double inv_alpha_;
  double tail_exponent_;  // (1 - alpha) / alpha
};

/// L = gamma * Z^{1/alpha} * S with Z ~ Exp(1) independent of S.
class LinnikGenerator {
 public:
  explicit LinnikGenerator(const LinnikParams& params);

  double operator()(CounterRng& rng) const;
  void fill(CounterRng& rng, std::span<double> out) const;
  const LinnikParams& params() const { return params_; }

 private:
  LinnikParams params_;
  SymmetricStableGenerator stable_;
  double inv_alpha_;
};

/// -log(U), U uniform on (0, 1).
inline double draw_exponential(CounterRng& rng) { return -std::log(rng.uniform_open()); }

Sample sample_exponential(const RngStream& rng, std::size_t n);
Sample sample_symmetric_stable(const RngStream& rng, double alpha, std::size_t n);
/// Standard Laplace (location 0, scale 1) as the difference of two exponentials.
Sample sample_laplace(const RngStream& rng, std::size_t n);
Sample sample_linnik(const RngStream& rng, const LinnikParams& params, std::size_t n);

/// Text format: optional '#'-prefixed header lines carrying `alpha=`, `gamma=`,
/// `seed=` and `stream=` entries, then one value per line at 17 significant
/// digits.
void write_sample(std::ostream& out, const Sample& sample);
Sample read_sample(std::istream& in);

}  // namespace linnik
