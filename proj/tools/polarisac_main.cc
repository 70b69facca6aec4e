// polarisac: single runs, Monte-Carlo campaigns, trade-off sweeps and gradient checks.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "polarisac/campaign.hpp"
#include "polarisac/config_io.hpp"
#include "polarisac/errors.hpp"
#include "polarisac/gradients.hpp"
#include "polarisac/report.hpp"

namespace fs = std::filesystem;
using namespace polarisac;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitCheckFailed = 3;

struct CommonOptions {
  std::string preset = "desk";
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int workers = 1;
  std::string out;
};

RunConfig PresetDefaults(const std::string& preset) {
  RunConfig defaults;
  const bool paper = preset == "paper";
  defaults.scenario = paper ? ScenarioConfig::Paper() : ScenarioConfig::Desk();
  defaults.hyper = paper ? Hyperparams::Paper() : Hyperparams::Desk();
  return defaults;
}

RunConfig LoadRun(const CommonOptions& opt) {
  RunConfig cfg = PresetDefaults(opt.preset);
  if (!opt.config.empty()) {
    cfg = LoadRunConfig(opt.config, cfg);
  }
  cfg.scenario.Validate();
  cfg.hyper.Validate();
  return cfg;
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot open " + path.string() + " for writing");
  }
  return out;
}

int WriteCampaignOutputs(const std::vector<ResultRow>& rows, const fs::path& dir) {
  std::ofstream summary = OpenOutput(dir / "summary.csv");
  WriteSummary(summary, Summarize(rows));
  int failures = 0;
  for (const ResultRow& row : rows) {
    failures += row.status != "ok";
  }
  std::cout << rows.size() << " rows, " << failures << " failed; results in " << dir.string()
            << "\n";
  return failures == 0 ? 0 : kExitNumerical;
}

std::vector<ResultRow> RunPlanStreaming(const ExperimentPlan& plan, int workers,
                                        const fs::path& dir) {
  std::ofstream rows_csv = OpenOutput(dir / "rows.csv");
  std::ofstream timing_csv = OpenOutput(dir / "timing.csv");
  CampaignOptions options;
  options.workers = workers;
  options.row_sink = &rows_csv;
  options.timing_sink = &timing_csv;
  return RunCampaign(plan, options);
}

int CmdRun(const CommonOptions& opt, const std::string& method_name) {
  const RunConfig cfg = LoadRun(opt);
  const Method method = ParseMethod(method_name);
  const std::uint64_t seed = opt.seed.value_or(cfg.scenario.seed);

  std::optional<std::ofstream> trace_file;
  TraceObserver observer;
  if (!opt.out.empty()) {
    trace_file.emplace(OpenOutput(fs::path(opt.out) / "trace.jsonl"));
    observer.on_inner = [&](const InnerRecord& r) { *trace_file << ToJsonLine(r) << '\n'; };
    observer.on_outer = [&](const OuterRecord& r) {
      *trace_file << ToJsonLine(r) << '\n';
      trace_file->flush();
    };
  }
  const RunOutput result =
      RunSingle(cfg.scenario, cfg.hyper, seed, method, trace_file ? &observer : nullptr);
  if (!opt.out.empty()) {
    std::ofstream point = OpenOutput(fs::path(opt.out) / "point.txt");
    WritePoint(point, result.point);
  }
  WriteRowsHeader(std::cout);
  WriteRow(std::cout, result.row);
  return result.row.status == "ok" ? 0 : kExitNumerical;
}

int CmdCampaign(const CommonOptions& opt) {
  const RunConfig defaults = PresetDefaults(opt.preset);
  ExperimentPlan plan;
  if (!opt.config.empty()) {
    plan = LoadPlan(opt.config, defaults);
  } else {
    plan.scenario = defaults.scenario;
    plan.hyper = defaults.hyper;
  }
  if (opt.trials) {
    plan.n_trials = *opt.trials;
  }
  if (opt.seed) {
    plan.master_seed = *opt.seed;
  }
  if (!opt.out.empty()) {
    plan.output_dir = opt.out;
  }
  plan.Validate();
  const auto rows = RunPlanStreaming(plan, opt.workers, plan.output_dir);
  return WriteCampaignOutputs(rows, plan.output_dir);
}

int CmdSweepTradeoff(const CommonOptions& opt, std::vector<double> rho_values) {
  const RunConfig cfg = LoadRun(opt);
  if (rho_values.empty()) {
    for (int i = 0; i <= 10; ++i) {
      rho_values.push_back(i / 10.0);
    }
  }
  ExperimentPlan plan;
  plan.scenario = cfg.scenario;
  plan.hyper = cfg.hyper;
  plan.sweep_axis = SweepAxis::kRho;
  plan.sweep_values = rho_values;
  plan.n_trials = opt.trials.value_or(20);
  plan.methods = {Method::kEpPrmgd};
  plan.master_seed = opt.seed.value_or(1);
  plan.output_dir = opt.out.empty() ? "out/tradeoff" : opt.out;
  for (double rho : rho_values) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw ConfigError("rho values must lie in [0, 1]");
    }
  }
  plan.Validate();
  const auto rows = RunPlanStreaming(plan, opt.workers, plan.output_dir);
  return WriteCampaignOutputs(rows, plan.output_dir);
}

int CmdGradcheck(const CommonOptions& opt, bool use_small, double lambda, double mu, double step,
                 double tolerance) {
  RunConfig cfg = LoadRun(opt);
  if (use_small && opt.config.empty()) {
    cfg.scenario.m_tx = cfg.scenario.m_rx = 4;
    cfg.scenario.n_users = 2;
    cfg.scenario.n_radar_streams = 2;
    cfg.scenario.n_targets = 2;
    cfg.scenario.n_clutter = 1;
  }
  const std::uint64_t seed = opt.seed.value_or(cfg.scenario.seed);
  cfg.scenario.seed = seed;
  const ChannelSet channels = SampleScenario(cfg.scenario);
  const ProductPoint x = GradientCheckPoint(cfg.scenario, channels, seed);
  const Blocks analytic = EuclideanGradient(x, channels, cfg.scenario, lambda, mu);
  const Blocks reference = FiniteDifferenceGradient(x, channels, cfg.scenario, lambda, mu, step);

  bool ok = true;
  std::cout << std::left << std::setw(10) << "block" << std::right << std::setw(16) << "analytic"
            << std::setw(16) << "finite-diff" << std::setw(14) << "rel.error" << "\n";
  for (const BlockError& e : CompareBlocks(analytic, reference)) {
    const bool pass = e.relative_error <= tolerance;
    ok = ok && pass;
    std::cout << std::left << std::setw(10) << e.block << std::right << std::scientific
              << std::setprecision(6) << std::setw(16) << e.analytic_norm << std::setw(16)
              << e.reference_norm << std::setprecision(3) << std::setw(14) << e.relative_error
              << (pass ? "" : "  FAIL") << "\n";
  }
  std::cout << (ok ? "gradcheck passed" : "gradcheck FAILED") << " (tolerance " << tolerance
            << ")\n";
  return ok ? 0 : kExitCheckFailed;
}

int CmdSummarize(const std::string& input, const std::string& output) {
  std::ifstream in(input);
  if (!in) {
    throw ConfigError("cannot open " + input);
  }
  const auto summary = Summarize(ReadRows(in));
  if (output.empty()) {
    WriteSummary(std::cout, summary);
  } else {
    std::ofstream out = OpenOutput(output);
    WriteSummary(out, summary);
  }
  return 0;
}

void AddCommon(CLI::App* cmd, CommonOptions& opt, bool with_trials, bool with_workers) {
  cmd->add_option("--preset", opt.preset, "Base scenario")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--config", opt.config, "JSON document overriding the preset")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "Trial seed (run, gradcheck) or master seed");
  if (with_trials) {
    cmd->add_option("--trials", opt.trials, "Trials per sweep cell")->check(CLI::PositiveNumber);
  }
  if (with_workers) {
    cmd->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--out", opt.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-min SINR/SCNR beamforming with polarization-reconfigurable arrays"};
  app.require_subcommand(1);

  CommonOptions run_opt;
  std::string method = "ep_prmgd";
  auto* run = app.add_subcommand("run", "Single trial; prints the result row and writes the trace");
  AddCommon(run, run_opt, false, false);
  run->add_option("--method", method, "ep_prmgd, fp_fb or pr_wofb");

  CommonOptions campaign_opt;
  auto* campaign = app.add_subcommand("campaign", "Methods x sweep values x trials from a plan");
  AddCommon(campaign, campaign_opt, true, true);

  CommonOptions tradeoff_opt;
  std::vector<double> rho_values;
  auto* tradeoff = app.add_subcommand("sweep-tradeoff", "EP-PRMGD over a grid of rho values");
  AddCommon(tradeoff, tradeoff_opt, true, true);
  tradeoff->add_option("--rho", rho_values, "Trade-off weights (default 0, 0.1, ..., 1)");

  CommonOptions grad_opt;
  double lambda = 0.08;
  double mu = 1.5;
  double step = 1e-6;
  double tolerance = 1e-5;
  bool full_size = false;
  auto* gradcheck = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradient");
  AddCommon(gradcheck, grad_opt, false, false);
  gradcheck->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
  gradcheck->add_option("--mu", mu)->check(CLI::PositiveNumber);
  gradcheck->add_option("--step", step, "Central-difference step")->check(CLI::PositiveNumber);
  gradcheck->add_option("--tol", tolerance, "Relative error bound per block");
  gradcheck->add_flag("--full-size", full_size,
                      "Check the preset dimensions instead of the 4-antenna instance");

  std::string rows_path;
  std::string summary_path;
  auto* summarize = app.add_subcommand("summarize", "Mean and standard error per cell");
  summarize->add_option("rows", rows_path, "rows.csv from a campaign")->required();
  summarize->add_option("--out", summary_path, "Summary CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*run) return CmdRun(run_opt, method);
    if (*campaign) return CmdCampaign(campaign_opt);
    if (*tradeoff) return CmdSweepTradeoff(tradeoff_opt, rho_values);
    if (*gradcheck) return CmdGradcheck(grad_opt, !full_size, lambda, mu, step, tolerance);
    if (*summarize) return CmdSummarize(rows_path, summary_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
