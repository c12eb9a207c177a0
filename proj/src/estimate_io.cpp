#include "linnik/estimate_io.hpp"

#include <ostream>

#include "json.hpp"
#include "linnik/error.hpp"
#include "linnik/montecarlo.hpp"

namespace linnik {

std::string estimate_to_json(const EstimateResult& r, int indent) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  auto interval = [](const std::optional<Interval>& v) {
    return v ? json::array({v->lower, v->upper}) : json(nullptr);
  };
  json diagnostics = json::object();
  for (const auto& [key, value] : r.diagnostics) diagnostics[key] = value;
  const json doc = {{"alpha_hat", r.alpha_hat},
                    {"gamma_hat", r.gamma_hat},
                    {"method", std::string(to_string(r.method))},
                    {"n", r.n},
                    {"stderr_alpha", opt(r.stderr_alpha)},
                    {"stderr_gamma", opt(r.stderr_gamma)},
                    {"ci_alpha", interval(r.ci_alpha)},
                    {"ci_gamma", interval(r.ci_gamma)},
                    {"epsilon", opt(r.epsilon)},
                    {"diagnostics", diagnostics}};
  return doc.dump(indent);
}

void write_estimate_csv(std::ostream& out, const EstimateResult& r) {
  auto field = [](const std::optional<double>& v) { return v ? format_shortest(*v) : std::string(); };
  auto lo = [](const std::optional<Interval>& v) { return v ? format_shortest(v->lower) : std::string(); };
  auto hi = [](const std::optional<Interval>& v) { return v ? format_shortest(v->upper) : std::string(); };
  std::string flags;
  for (const auto& [key, value] : r.diagnostics) {
    if (!flags.empty()) flags += ';';
    flags += key + "=" + format_shortest(value);
  }
  out << "method,n,alpha_hat,gamma_hat,stderr_alpha,stderr_gamma,ci_alpha_lower,ci_alpha_upper,ci_gamma_lower,"
         "ci_gamma_upper,epsilon,diagnostics\n";
  out << to_string(r.method) << ',' << r.n << ',' << format_shortest(r.alpha_hat) << ','
      << format_shortest(r.gamma_hat) << ',' << field(r.stderr_alpha) << ',' << field(r.stderr_gamma) << ','
      << lo(r.ci_alpha) << ',' << hi(r.ci_alpha) << ',' << lo(r.ci_gamma) << ',' << hi(r.ci_gamma) << ','
      << field(r.epsilon) << ',' << flags << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed to write estimate");
}

}  // namespace linnik
