#include "linnik/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "linnik/sampling.hpp"

namespace linnik {

std::string_view to_string(Parameter p) { return p == Parameter::Alpha ? "alpha" : "gamma"; }

void ExperimentConfig::validate() const {
  if (replicates < 1) throw Error(ErrorCode::InvalidConfig, "replicates must be >= 1");
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "experiment grid is empty");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be in (0,1)");
  if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "no estimation methods selected");
  for (const auto& cell : grid) {
    cell.params.validate();
    if (cell.sizes.empty()) throw Error(ErrorCode::InvalidConfig, "grid cell without sample sizes");
    for (auto n : cell.sizes)
      if (n < 2) throw Error(ErrorCode::InvalidConfig, "sample sizes must be >= 2");
  }
  if (std::find(methods.begin(), methods.end(), Method::FracMoment) != methods.end()) frac_config.validate();
  if (std::find(methods.begin(), methods.end(), Method::CharFn) != methods.end()) charfn_config(charfn_lambdas);
}

ExperimentConfig table_config(TableId table, std::size_t replicates, std::uint64_t master_seed) {
  ExperimentConfig cfg;
  cfg.replicates = replicates;
  cfg.master_seed = master_seed;
  const std::vector<std::size_t> sizes{100, 1000, 10000};
  if (table == TableId::T4) {
    for (auto p : {LinnikParams{1.1, 0.9}, LinnikParams{1.3, 2.0}, LinnikParams{1.5, 1.0}, LinnikParams{1.7, 10.0},
                   LinnikParams{1.99, 0.1}})
      cfg.grid.push_back({p, sizes});
    cfg.methods = {Method::MoM, Method::FracMoment, Method::CharFn};
  } else {
    for (auto p : {LinnikParams{0.1, 0.05}, LinnikParams{0.2, 0.5}, LinnikParams{0.5, 1000.0},
                   LinnikParams{0.8, 100.0}, LinnikParams{1.0, 0.2}, LinnikParams{1.2, 10.0},
                   LinnikParams{1.75, 1.0}, LinnikParams{2.0, 0.1}})
      cfg.grid.push_back({p, sizes});
    cfg.methods = {Method::MoM};
  }
  return cfg;
}

std::uint64_t cell_seed(std::uint64_t master_seed, const LinnikParams& params, std::size_t n) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ std::bit_cast<std::uint64_t>(params.alpha));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(params.gamma));
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  return h;
}

namespace {

/// Runs body(i) for i in [0, count) on up to `workers` threads; the first
/// exception is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ReplicateOutcome to_outcome(const EstimateResult& r) {
  ReplicateOutcome o;
  o.ok = true;
  o.alpha_hat = r.alpha_hat;
  o.gamma_hat = r.gamma_hat;
  o.ci_alpha = r.ci_alpha;
  o.ci_gamma = r.ci_gamma;
  return o;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

double mad_about(std::span<const double> estimates, double truth) {
  if (estimates.empty()) throw Error(ErrorCode::InvalidInput, "mad of an empty set");
  static const double kNormalConsistency = 1.0 / normal_quantile(0.75);
  std::vector<double> dev(estimates.size());
  std::transform(estimates.begin(), estimates.end(), dev.begin(), [truth](double e) { return std::abs(e - truth); });
  return kNormalConsistency * median_inplace(dev);
}

CellSimulation simulate_cell(const LinnikParams& params, std::size_t n, const ExperimentConfig& config) {
  params.validate();
  CellSimulation cell;
  cell.params = params;
  cell.n = n;
  cell.methods = config.methods;
  cell.outcomes.assign(config.methods.size(), std::vector<ReplicateOutcome>(config.replicates));

  const LinnikGenerator generator(params);
  const std::uint64_t seed = cell_seed(config.master_seed, params, n);
  std::optional<CharFnConfig> cf;
  if (std::find(config.methods.begin(), config.methods.end(), Method::CharFn) != config.methods.end())
    cf = charfn_config(config.charfn_lambdas);

  parallel_for(config.replicates, config.workers, [&](std::size_t r) {
    thread_local std::vector<double> values;
    values.resize(n);
    CounterRng rng(RngStream{seed, static_cast<std::uint64_t>(r + 1)});
    generator.fill(rng, values);

    for (std::size_t k = 0; k < config.methods.size(); ++k) {
      ReplicateOutcome& out = cell.outcomes[k][r];
      try {
        switch (config.methods[k]) {
          case Method::MoM: out = to_outcome(estimate_mom(values, config.epsilon)); break;
          case Method::FracMoment: out = to_outcome(estimate_frac_moment(values, config.frac_config)); break;
          case Method::CharFn: out = to_outcome(estimate_charfn(values, *cf, config.epsilon)); break;
        }
      } catch (const Error& e) {
        out = ReplicateOutcome{};
        out.error = e.code();
      }
    }
  });
  return cell;
}

std::vector<ReportRow> summarize_cell(const CellSimulation& cell) {
  std::vector<ReportRow> rows;
  for (std::size_t k = 0; k < cell.methods.size(); ++k) {
    const auto& outcomes = cell.outcomes[k];
    for (Parameter parameter : {Parameter::Alpha, Parameter::Gamma}) {
      const double truth = parameter == Parameter::Alpha ? cell.params.alpha : cell.params.gamma;
      ReportRow row;
      row.params_true = cell.params;
      row.n = cell.n;
      row.method = cell.methods[k];
      row.parameter = parameter;

      std::vector<double> estimates;
      double lower_sum = 0.0, upper_sum = 0.0;
      std::size_t with_ci = 0, hits = 0;
      for (const auto& o : outcomes) {
        if (!o.ok) {
          ++row.failures;
          continue;
        }
        estimates.push_back(parameter == Parameter::Alpha ? o.alpha_hat : o.gamma_hat);
        const auto& ci = parameter == Parameter::Alpha ? o.ci_alpha : o.ci_gamma;
        if (ci) {
          ++with_ci;
          lower_sum += ci->lower;
          upper_sum += ci->upper;
          if (ci->contains(truth)) ++hits;
        }
      }
      row.replicates_used = estimates.size();

      if (!estimates.empty()) {
        const double m = static_cast<double>(estimates.size());
        const double mean = std::accumulate(estimates.begin(), estimates.end(), 0.0) / m;
        row.mean = mean;
        row.mad = mad_about(estimates, truth);
        if (estimates.size() >= 2) {
          double ss = 0.0;
          for (double e : estimates) ss += (e - mean) * (e - mean);
          row.cv_percent = 100.0 * std::sqrt(ss / (m - 1.0)) / std::abs(mean);
        }
      }
      if (with_ci > 0) {
        row.ci_lower_avg = lower_sum / static_cast<double>(with_ci);
        row.ci_upper_avg = upper_sum / static_cast<double>(with_ci);
        row.coverage = static_cast<double>(hits) / static_cast<double>(with_ci);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<ReportRow> run_cell(const LinnikParams& params, std::size_t n, const ExperimentConfig& config) {
  return summarize_cell(simulate_cell(params, n, config));
}

ExperimentReport run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  ExperimentReport report;
  for (const auto& cell : config.grid) {
    for (std::size_t n : cell.sizes) {
      if (progress)
        progress("cell alpha=" + format_shortest(cell.params.alpha) + " gamma=" + format_shortest(cell.params.gamma) +
                 " n=" + std::to_string(n));
      auto rows = run_cell(cell.params, n, config);
      report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    }
  }
  return report;
}

ExperimentReport run_table(TableId table, ExperimentConfig config, const ProgressFn& progress) {
  const ExperimentConfig defaults = table_config(table, config.replicates, config.master_seed);
  if (config.grid.empty()) config.grid = defaults.grid;
  if (config.methods.empty()) config.methods = defaults.methods;
  ExperimentReport report = run_experiment(config, progress);
  report.table = table;
  return report;
}

std::pair<double, double> coverage_check(const LinnikParams& params, std::size_t n, std::size_t m,
                                         std::uint64_t seed, unsigned workers) {
  ExperimentConfig cfg;
  cfg.grid = {{params, {n}}};
  cfg.replicates = m;
  cfg.master_seed = seed;
  cfg.methods = {Method::MoM};
  cfg.epsilon = 0.05;
  cfg.workers = workers;
  cfg.validate();
  const auto rows = run_cell(params, n, cfg);
  return {rows[0].coverage.value_or(0.0), rows[1].coverage.value_or(0.0)};
}

const ReportRow* ExperimentReport::find(const LinnikParams& params, std::size_t n, Method method,
                                        Parameter parameter) const {
  for (const auto& row : rows)
    if (row.params_true == params && row.n == n && row.method == method && row.parameter == parameter) return &row;
  return nullptr;
}

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt_field(const std::optional<double>& v) { return v ? format_shortest(*v) : std::string(); }

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << format_shortest(r.params_true.alpha) << ',' << format_shortest(r.params_true.gamma) << ',' << r.n << ','
        << to_string(r.method) << ',' << to_string(r.parameter) << ',' << opt_field(r.mean) << ','
        << opt_field(r.mad) << ',' << opt_field(r.cv_percent) << ',' << opt_field(r.ci_lower_avg) << ','
        << opt_field(r.ci_upper_avg) << ',' << opt_field(r.coverage) << ',' << r.replicates_used << ','
        << r.failures << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed to write report");
}

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"alpha_true", r.params_true.alpha},
                    {"gamma_true", r.params_true.gamma},
                    {"n", r.n},
                    {"method", std::string(to_string(r.method))},
                    {"parameter", std::string(to_string(r.parameter))},
                    {"mean", opt(r.mean)},
                    {"mad", opt(r.mad)},
                    {"cv_percent", opt(r.cv_percent)},
                    {"ci_lower_avg", opt(r.ci_lower_avg)},
                    {"ci_upper_avg", opt(r.ci_upper_avg)},
                    {"coverage", opt(r.coverage)},
                    {"replicates", r.replicates_used},
                    {"failures", r.failures}});
  }
  json doc = {{"rows", rows}};
  if (report.table) doc["table"] = static_cast<int>(*report.table);
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed to write report");
}

}  // namespace linnik
