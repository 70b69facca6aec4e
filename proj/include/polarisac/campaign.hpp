#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polarisac/manifold.hpp"
#include "polarisac/scenario.hpp"
#include "polarisac/solver.hpp"

namespace polarisac {

enum class Method { kEpPrmgd, kFixedPolarization, kSumObjective };

/// "ep_prmgd", "fp_fb", "pr_wofb".
std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);

enum class SweepAxis { kNone, kAntennas, kSnrDb, kUsers, kTargets, kRho };

/// "none", "antennas", "snr_db", "users", "targets", "rho".
std::string_view SweepAxisName(SweepAxis axis);
SweepAxis ParseSweepAxis(std::string_view name);

/// Returns `base` with the swept quantity set to `value`:
/// antennas -> m_tx = m_rx; snr_db -> power_dbm = noise_user_dbm + value (noise fixed);
/// users -> n_users; targets -> n_targets; rho -> rho. Counts must be integral.
ScenarioConfig ApplySweep(ScenarioConfig base, SweepAxis axis, double value);

struct ExperimentPlan {
  ScenarioConfig scenario = ScenarioConfig::Desk();
  Hyperparams hyper = Hyperparams::Desk();
  SweepAxis sweep_axis = SweepAxis::kNone;
  std::vector<double> sweep_values;
  int n_trials = 50;
  std::vector<Method> methods{Method::kEpPrmgd};
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";

  /// Throws ConfigError on an empty sweep (for axis != none), n_trials < 1 or no methods.
  void Validate() const;
  /// The effective value list: {0} for axis none.
  std::vector<double> Cells() const;
};

struct ResultRow {
  std::string method;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double min_sinr_db = 0.0;
  double min_scnr_db = 0.0;
  double final_a = 0.0;
  double final_b = 0.0;
  double v_max_final = 0.0;
  int outer_iters = 0;
  double wall_time_s = 0.0;
  std::string status = "ok";
};

struct RunOutput {
  ResultRow row;
  SolveTrace trace;
  ProductPoint point;
};

/// Samples channels from `seed`, starts at RandomPoint(cfg, seed) and runs `method`.
RunOutput RunSingle(ScenarioConfig cfg, const Hyperparams& hyper, std::uint64_t seed, Method method,
                    const TraceObserver* observer = nullptr);

/// Seed of trial `trial`: Mix64(trial ^ Mix64(master)). Mix64 is a bijection, so distinct
/// trials of a campaign always get distinct seeds. Every method and every sweep value reuses
/// the seed of its trial (common random numbers), which pairs the comparisons across methods
/// and sweep cells.
std::uint64_t TrialSeed(std::uint64_t master, std::uint32_t trial);

struct CampaignOptions {
  int workers = 1;
  /// Rows are streamed here in canonical cell order as soon as a prefix completes.
  std::ostream* row_sink = nullptr;
  /// Wall-clock timings (the only nondeterministic column) go to a separate sink.
  std::ostream* timing_sink = nullptr;
};

/// Runs methods x sweep values x trials. Failures become rows with a non-"ok" status.
/// The returned rows are in canonical order (method, value, trial) regardless of workers.
std::vector<ResultRow> RunCampaign(const ExperimentPlan& plan, const CampaignOptions& options = {});

/// EP-PRMGD over a grid of trade-off weights.
std::vector<ResultRow> SweepTradeoff(const ScenarioConfig& base, const Hyperparams& hyper,
                                     const std::vector<double>& rho_values, int n_trials,
                                     std::uint64_t master_seed, const CampaignOptions& options = {});

struct SummaryRow {
  std::string method;
  double sweep_value = 0.0;
  int count = 0;
  double mean_min_sinr_db = 0.0;
  double stderr_min_sinr_db = 0.0;
  double mean_min_scnr_db = 0.0;
  double stderr_min_scnr_db = 0.0;
};

/// Mean and standard error per (method, sweep value), over rows with status "ok".
/// Groups keep first-appearance order. Throws DomainError on empty input.
std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows);

void WriteRowsHeader(std::ostream& out);
void WriteRow(std::ostream& out, const ResultRow& row);
void WriteTimingHeader(std::ostream& out);
void WriteTiming(std::ostream& out, const ResultRow& row);
std::vector<ResultRow> ReadRows(std::istream& in);
void WriteSummary(std::ostream& out, const std::vector<SummaryRow>& summary);

}  // namespace polarisac
