#include "linnik/sampling.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "linnik/error.hpp"

namespace linnik {

namespace {

void require_count(std::size_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "sample size n must be >= 1");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw Error(ErrorCode::InvalidParams, "alpha must be in (0,2]");
}

}  // namespace

SymmetricStableGenerator::SymmetricStableGenerator(double alpha)
    : alpha_(alpha), inv_alpha_(1.0 / alpha), tail_exponent_((1.0 - alpha) / alpha) {
  require_alpha(alpha);
}

double SymmetricStableGenerator::operator()(CounterRng& rng) const {
  const double u = constants::pi * (rng.uniform_open() - 0.5);
  if (alpha_ == 1.0) return std::tan(u);
  const double w = draw_exponential(rng);
  const double head = std::sin(alpha_ * u) / std::pow(std::cos(u), inv_alpha_);
  return head * std::pow(std::cos(u - alpha_ * u) / w, tail_exponent_);
}

LinnikGenerator::LinnikGenerator(const LinnikParams& params)
    : params_(params), stable_((params.validate(), params.alpha)), inv_alpha_(1.0 / params.alpha) {}

double LinnikGenerator::operator()(CounterRng& rng) const {
  const double z = draw_exponential(rng);
  const double s = stable_(rng);
  return params_.gamma * std::pow(z, inv_alpha_) * s;
}

void LinnikGenerator::fill(CounterRng& rng, std::span<double> out) const {
  for (double& v : out) v = (*this)(rng);
}

Sample sample_exponential(const RngStream& rng, std::size_t n) {
  require_count(n);
  CounterRng engine(rng);
  Sample s;
  s.values.resize(n);
  for (double& v : s.values) v = draw_exponential(engine);
  s.seed_info = rng;
  return s;
}

Sample sample_symmetric_stable(const RngStream& rng, double alpha, std::size_t n) {
  require_count(n);
  const SymmetricStableGenerator gen(alpha);
  CounterRng engine(rng);
  Sample s;
  s.values.resize(n);
  for (double& v : s.values) v = gen(engine);
  s.seed_info = rng;
  return s;
}

Sample sample_laplace(const RngStream& rng, std::size_t n) {
  require_count(n);
  CounterRng engine(rng);
  Sample s;
  s.values.resize(n);
  for (double& v : s.values) {
    const double e1 = draw_exponential(engine);
    const double e2 = draw_exponential(engine);
    v = e1 - e2;
  }
  s.seed_info = rng;
  return s;
}

Sample sample_linnik(const RngStream& rng, const LinnikParams& params, std::size_t n) {
  require_count(n);
  const LinnikGenerator gen(params);
  CounterRng engine(rng);
  Sample s;
  s.values.resize(n);
  gen.fill(engine, s.values);
  s.params_true = params;
  s.seed_info = rng;
  return s;
}

void write_sample(std::ostream& out, const Sample& sample) {
  char buf[128];
  if (sample.params_true) {
    std::snprintf(buf, sizeof buf, "# alpha=%.17g gamma=%.17g\n", sample.params_true->alpha,
                  sample.params_true->gamma);
    out << buf;
  }
  if (sample.seed_info)
    out << "# seed=" << sample.seed_info->master_seed << " stream=" << sample.seed_info->stream_id << '\n';
  for (double v : sample.values) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
  if (!out) throw Error(ErrorCode::IoError, "failed to write sample");
}

namespace {

double parse_double(std::string_view text, std::size_t line_no) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw Error(ErrorCode::InvalidInput,
                "line " + std::to_string(line_no) + ": not a finite number: '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view text, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": bad integer in header");
  return value;
}

}  // namespace

Sample read_sample(std::istream& in) {
  Sample sample;
  std::optional<double> alpha, gamma;
  std::optional<std::uint64_t> seed, stream;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      std::istringstream header(line.substr(first + 1));
      std::string token;
      while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string_view val = std::string_view(token).substr(eq + 1);
        if (key == "alpha") alpha = parse_double(val, line_no);
        else if (key == "gamma") gamma = parse_double(val, line_no);
        else if (key == "seed") seed = parse_u64(val, line_no);
        else if (key == "stream") stream = parse_u64(val, line_no);
      }
      continue;
    }
    sample.values.push_back(parse_double(line, line_no));
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "failed to read sample");
  if (sample.values.empty()) throw Error(ErrorCode::InvalidInput, "sample file contains no observations");
  if (alpha && gamma) sample.params_true = LinnikParams{*alpha, *gamma};
  if (seed) sample.seed_info = RngStream{*seed, stream.value_or(0)};
  return sample;
}

}  // namespace linnik
