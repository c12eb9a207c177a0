#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linnik/error.hpp"
#include "linnik/estimators.hpp"

namespace linnik {

enum class TableId { T1 = 1, T2 = 2, T3 = 3, T4 = 4 };
enum class Parameter { Alpha, Gamma };

std::string_view to_string(Parameter p);

struct GridCell {
  LinnikParams params;
  std::vector<std::size_t> sizes;
};

struct ExperimentConfig {
  std::vector<GridCell> grid;
  std::size_t replicates = 2000;
  std::uint64_t master_seed = 1;
  std::vector<Method> methods{Method::MoM};
  double epsilon = 0.05;
  FracMomentConfig frac_config{};
  std::vector<double> charfn_lambdas{0.001, 0.1};
  unsigned workers = 1;

  void validate() const;
};

/// The published grid, sizes and methods for a table, with the given
/// replicate count and seed.
ExperimentConfig table_config(TableId table, std::size_t replicates = 2000, std::uint64_t master_seed = 1);

/// Seed shared by every replicate stream of the cell (alpha, gamma, n).
std::uint64_t cell_seed(std::uint64_t master_seed, const LinnikParams& params, std::size_t n);

struct ReplicateOutcome {
  bool ok = false;
  double alpha_hat = 0.0;
  double gamma_hat = 0.0;
  std::optional<Interval> ci_alpha;
  std::optional<Interval> ci_gamma;
  std::optional<ErrorCode> error;
};

/// Raw per-replicate estimates: outcomes[k][r] is method k on replicate r.
struct CellSimulation {
  LinnikParams params;
  std::size_t n = 0;
  std::vector<Method> methods;
  std::vector<std::vector<ReplicateOutcome>> outcomes;
};

struct ReportRow {
  LinnikParams params_true;
  std::size_t n = 0;
  Method method = Method::MoM;
  Parameter parameter = Parameter::Alpha;
  std::optional<double> mean;
  std::optional<double> mad;
  std::optional<double> cv_percent;
  std::optional<double> ci_lower_avg;
  std::optional<double> ci_upper_avg;
  std::optional<double> coverage;
  std::size_t replicates_used = 0;
  std::size_t failures = 0;
};

struct ExperimentReport {
  std::optional<TableId> table;
  std::vector<ReportRow> rows;

  /// First row matching the key, or nullptr.
  const ReportRow* find(const LinnikParams& params, std::size_t n, Method method, Parameter parameter) const;
};

/// 1.4826 * median(|estimate - truth|), the normal-consistent absolute
/// deviation around the true value.
double mad_about(std::span<const double> estimates, double truth);

/// Draws the replicates of one cell (stream r = 1..m under cell_seed) and
/// applies each configured estimator to the same sample.
CellSimulation simulate_cell(const LinnikParams& params, std::size_t n, const ExperimentConfig& config);

/// Aggregates a simulated cell into one row per (method, parameter).
std::vector<ReportRow> summarize_cell(const CellSimulation& cell);

std::vector<ReportRow> run_cell(const LinnikParams& params, std::size_t n, const ExperimentConfig& config);

using ProgressFn = std::function<void(const std::string&)>;

/// Runs every grid cell. Empty grid/methods in `config` fall back to the
/// table's published defaults.
ExperimentReport run_table(TableId table, ExperimentConfig config, const ProgressFn& progress = {});
ExperimentReport run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// MoM coverage of (alpha, gamma) at the 95% level over m replicates.
std::pair<double, double> coverage_check(const LinnikParams& params, std::size_t n, std::size_t m,
                                         std::uint64_t seed, unsigned workers = 1);

inline constexpr std::string_view kReportCsvHeader =
    "alpha_true,gamma_true,n,method,parameter,mean,mad,cv_percent,ci_lower_avg,ci_upper_avg,coverage,replicates,"
    "failures";

void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_report_json(std::ostream& out, const ExperimentReport& report);

/// Shortest decimal string that round-trips to the same double.
std::string format_shortest(double value);

}  // namespace linnik
