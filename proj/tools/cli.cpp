#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "linnik/distribution.hpp"
#include "linnik/error.hpp"
#include "linnik/estimate_io.hpp"
#include "linnik/estimators.hpp"
#include "linnik/montecarlo.hpp"
#include "linnik/sampling.hpp"

namespace linnik::cli {

namespace {

struct SampleArgs {
  double alpha = 0.0;
  double gamma = 1.0;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvalArgs {
  double alpha = 0.0;
  double gamma = 1.0;
  std::string fn = "pdf";
  std::vector<double> x;
};

struct EstimateArgs {
  std::string input;
  std::string method = "mom";
  std::optional<double> epsilon;
  std::optional<double> q1, q2;
  std::vector<double> lambdas;
  std::string format = "json";
};

struct SimulateArgs {
  int table = 1;
  std::size_t replicates = 2000;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::vector<std::string> params;
  std::vector<std::string> methods;
  double epsilon = 0.05;
  std::string out;
  std::string format = "csv";
  bool quiet = false;
};

// Opens `path` for writing, or hands back `fallback` when path is empty or "-".
std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return file;
}

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
  const LinnikParams params{a.alpha, a.gamma};
  try {
    params.validate();
    if (a.n < 1) throw Error(ErrorCode::InvalidInput, "n must be >= 1");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    const Sample s = sample_linnik(RngStream{a.seed, 0}, params, a.n);
    std::ofstream file;
    write_sample(open_output(a.out, file, out), s);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const LinnikParams params{a.alpha, a.gamma};
  try {
    params.validate();
    for (double x : a.x)
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "x values must be finite");
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  try {
    for (double x : a.x) {
      double value;
      if (a.fn == "pdf") value = pdf(params, x);
      else if (a.fn == "cdf") value = cdf(params, x);
      else value = chf(params, x);
      out << format_shortest(x) << ',' << format_shortest(value) << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kEstimation;
  }
  return kOk;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  const Method method = method_from_string(a.method);
  if ((a.q1 || a.q2) && method != Method::FracMoment) {
    err << "error: --q1/--q2 only apply to --method frac\n";
    return kUsage;
  }
  if (!a.lambdas.empty() && method != Method::CharFn) {
    err << "error: --lambdas only applies to --method cf\n";
    return kUsage;
  }
  if (a.epsilon && !(*a.epsilon > 0.0 && *a.epsilon < 1.0)) {
    err << "error: epsilon must be in (0,1)\n";
    return kUsage;
  }

  Sample sample;
  try {
    std::ifstream in(a.input);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + a.input + "'");
    sample = read_sample(in);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }

  EstimateResult result;
  try {
    switch (method) {
      case Method::MoM: result = estimate_mom(sample, a.epsilon); break;
      case Method::FracMoment: {
        FracMomentConfig cfg;
        if (a.q1) cfg.q1 = *a.q1;
        if (a.q2) cfg.q2 = *a.q2;
        result = estimate_frac_moment(sample, cfg);
        break;
      }
      case Method::CharFn: {
        const std::vector<double> lambdas = a.lambdas.empty() ? std::vector<double>{0.001, 0.1} : a.lambdas;
        result = estimate_charfn(sample, charfn_config(lambdas), a.epsilon);
        break;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kEstimation;
  }

  if (a.format == "csv") {
    write_estimate_csv(out, result);
  } else {
    out << estimate_to_json(result) << '\n';
  }
  return kOk;
}

LinnikParams parse_pair(const std::string& text) {
  const auto sep = text.find_first_of(",:");
  if (sep == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--params expects alpha,gamma: '" + text + "'");
  try {
    std::size_t used_a = 0, used_g = 0;
    const std::string as = text.substr(0, sep), gs = text.substr(sep + 1);
    const LinnikParams p{std::stod(as, &used_a), std::stod(gs, &used_g)};
    if (used_a != as.size() || used_g != gs.size()) throw std::invalid_argument(text);
    return p;
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidConfig, "--params expects alpha,gamma: '" + text + "'");
  }
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    const auto table = static_cast<TableId>(a.table);
    cfg = table_config(table, a.replicates, a.seed);
    if (!a.params.empty()) {
      cfg.grid.clear();
      for (const auto& p : a.params) cfg.grid.push_back({parse_pair(p), {100, 1000, 10000}});
    }
    if (!a.sizes.empty())
      for (auto& cell : cfg.grid) cell.sizes = a.sizes;
    if (!a.methods.empty()) {
      cfg.methods.clear();
      for (const auto& m : a.methods) cfg.methods.push_back(method_from_string(m));
    }
    cfg.epsilon = a.epsilon;
    cfg.workers = a.workers;
    cfg.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  ExperimentReport report;
  try {
    ProgressFn progress;
    if (!a.quiet) progress = [&err](const std::string& msg) { err << msg << '\n'; };
    report = run_table(static_cast<TableId>(a.table), cfg, progress);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kEstimation;
  }

  try {
    std::ofstream file;
    std::ostream& dest = open_output(a.out, file, out);
    if (a.format == "json") write_report_json(dest, report);
    else write_report_csv(dest, report);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linnik distribution toolkit: sampling, evaluation, estimation and simulation tables"};
  app.name(args.empty() ? "linnik" : args.front());
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Draw Linnik variates and write them one per line");
  sample->add_option("--alpha", sample_args.alpha, "Index alpha in (0,2]")->required();
  sample->add_option("--gamma", sample_args.gamma, "Scale gamma > 0")->capture_default_str();
  sample->add_option("--n", sample_args.n, "Number of variates")->capture_default_str();
  sample->add_option("--seed", sample_args.seed, "Master seed")->capture_default_str();
  sample->add_option("--out", sample_args.out, "Output file (default: standard output)");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate pdf, cdf or characteristic function");
  eval->add_option("--alpha", eval_args.alpha, "Index alpha in (0,2]")->required();
  eval->add_option("--gamma", eval_args.gamma, "Scale gamma > 0")->capture_default_str();
  eval->add_option("--fn", eval_args.fn, "Function to evaluate")
      ->check(CLI::IsMember({"pdf", "cdf", "chf"}))
      ->capture_default_str();
  eval->add_option("--x", eval_args.x, "Evaluation points (comma separated or repeated)")
      ->required()
      ->delimiter(',');

  EstimateArgs est_args;
  auto* estimate = app.add_subcommand("estimate", "Estimate (alpha, gamma) from a sample file");
  estimate->add_option("--input", est_args.input, "Sample file (one value per line, '#' comments)")->required();
  estimate->add_option("--method", est_args.method, "mom | frac | cf")
      ->check(CLI::IsMember({"mom", "frac", "cf"}))
      ->capture_default_str();
  estimate->add_option("--epsilon", est_args.epsilon, "Attach (1-epsilon) confidence intervals");
  estimate->add_option("--q1", est_args.q1, "First fractional moment order (frac; default 0.5)");
  estimate->add_option("--q2", est_args.q2, "Second fractional moment order (frac; default 1)");
  estimate->add_option("--lambdas", est_args.lambdas, "Frequencies for cf (default 0.001,0.1)")->delimiter(',');
  estimate->add_option("--format", est_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo reproduction of the simulation tables");
  simulate->add_option("--table", sim_args.table, "Table id 1-4")->required()->check(CLI::Range(1, 4));
  simulate->add_option("--replicates", sim_args.replicates, "Replicates per cell")->capture_default_str();
  simulate->add_option("--sizes", sim_args.sizes, "Sample sizes (default 100,1000,10000)")->delimiter(',');
  simulate->add_option("--seed", sim_args.seed, "Master seed")->capture_default_str();
  simulate->add_option("--workers", sim_args.workers, "Worker threads")->capture_default_str();
  simulate->add_option("--params", sim_args.params, "Override grid with alpha,gamma pairs (repeatable)");
  simulate->add_option("--methods", sim_args.methods, "Override methods: mom,frac,cf")
      ->delimiter(',')
      ->check(CLI::IsMember({"mom", "frac", "cf", "MoM", "FracMoment", "CharFn"}));
  simulate->add_option("--epsilon", sim_args.epsilon, "CI miss probability")->capture_default_str();
  simulate->add_option("--out", sim_args.out, "Output file (default: standard output)");
  simulate->add_option("--format", sim_args.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  simulate->add_flag("--quiet", sim_args.quiet, "Suppress progress messages");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (sample->parsed()) return cmd_sample(sample_args, out, err);
  if (eval->parsed()) return cmd_eval(eval_args, out, err);
  if (estimate->parsed()) return cmd_estimate(est_args, out, err);
  return cmd_simulate(sim_args, out, err);
}

}  // namespace linnik::cli
