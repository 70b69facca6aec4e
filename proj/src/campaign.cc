#include "polarisac/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "polarisac/errors.hpp"
#include "polarisac/rng.hpp"
#include "polarisac/stats.hpp"

namespace polarisac {

namespace {

struct Cell {
  Method method;
  std::uint32_t value_index;
  double value;
  std::uint32_t trial;
};

int IntegralCount(double value, const char* axis) {
  const double rounded = std::round(value);
  if (rounded != value || rounded < 1.0 || rounded > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string("sweep value for ") + axis + " must be a positive integer");
  }
  return static_cast<int>(rounded);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

void FillMetrics(ResultRow& row, const ProductPoint& x, const ChannelSet& channels,
                 const ScenarioConfig& cfg) {
  const EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg);
  const double min_sinr = *std::min_element(links.sinr.begin(), links.sinr.end());
  const double min_scnr = *std::min_element(links.scnr.begin(), links.scnr.end());
  row.min_sinr_db = LinearToDb(min_sinr);
  row.min_scnr_db = LinearToDb(min_scnr);
  row.final_a = x.a;
  row.final_b = x.b;
  row.v_max_final = MaxViolation(x, links);
  if (!std::isfinite(row.min_sinr_db) || !std::isfinite(row.min_scnr_db) ||
      !std::isfinite(row.v_max_final)) {
    row.status = "nonfinite";
  }
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kEpPrmgd:
      return "ep_prmgd";
    case Method::kFixedPolarization:
      return "fp_fb";
    case Method::kSumObjective:
      return "pr_wofb";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : {Method::kEpPrmgd, Method::kFixedPolarization, Method::kSumObjective}) {
    if (MethodName(m) == name) {
      return m;
    }
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

std::string_view SweepAxisName(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kNone:
      return "none";
    case SweepAxis::kAntennas:
      return "antennas";
    case SweepAxis::kSnrDb:
      return "snr_db";
    case SweepAxis::kUsers:
      return "users";
    case SweepAxis::kTargets:
      return "targets";
    case SweepAxis::kRho:
      return "rho";
  }
  return "unknown";
}

SweepAxis ParseSweepAxis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::kNone, SweepAxis::kAntennas, SweepAxis::kSnrDb, SweepAxis::kUsers,
                      SweepAxis::kTargets, SweepAxis::kRho}) {
    if (SweepAxisName(a) == name) {
      return a;
    }
  }
  throw ConfigError("unknown sweep axis '" + std::string(name) + "'");
}

ScenarioConfig ApplySweep(ScenarioConfig base, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kNone:
      break;
    case SweepAxis::kAntennas:
      base.m_tx = base.m_rx = IntegralCount(value, "antennas");
      break;
    case SweepAxis::kSnrDb:
      base.power_dbm = base.noise_user_dbm + value;
      break;
    case SweepAxis::kUsers:
      base.n_users = IntegralCount(value, "users");
      break;
    case SweepAxis::kTargets:
      base.n_targets = IntegralCount(value, "targets");
      break;
    case SweepAxis::kRho:
      base.rho = value;
      break;
  }
  base.Validate();
  return base;
}

void ExperimentPlan::Validate() const {
  scenario.Validate();
  hyper.Validate();
  if (sweep_axis != SweepAxis::kNone && sweep_values.empty()) {
    throw ConfigError("sweep.values must be nonempty when sweep.axis is not 'none'");
  }
  if (n_trials < 1) {
    throw ConfigError("n_trials must be >= 1");
  }
  if (methods.empty()) {
    throw ConfigError("methods must name at least one method");
  }
  for (double v : Cells()) {
    ApplySweep(scenario, sweep_axis, v);
  }
}

std::vector<double> ExperimentPlan::Cells() const {
  if (sweep_axis == SweepAxis::kNone) {
    return {0.0};
  }
  return sweep_values;
}

std::uint64_t TrialSeed(std::uint64_t master, std::uint32_t trial) {
  return Mix64(static_cast<std::uint64_t>(trial) ^ Mix64(master));
}

RunOutput RunSingle(ScenarioConfig cfg, const Hyperparams& hyper, std::uint64_t seed, Method method,
                    const TraceObserver* observer) {
  const auto started = std::chrono::steady_clock::now();
  cfg.seed = seed;
  cfg.Validate();
  const ChannelSet channels = SampleScenario(cfg);
  const ProductPoint start = RandomPoint(cfg, seed);
  SolveResult solved;
  switch (method) {
    case Method::kEpPrmgd:
      solved = EpPrmgd(cfg, channels, hyper, start, observer);
      break;
    case Method::kFixedPolarization:
      solved = SolveFixedPolarization(cfg, channels, hyper, start, observer);
      break;
    case Method::kSumObjective:
      solved = SolveSumObjective(cfg, channels, hyper, start, observer);
      break;
  }
  RunOutput out;
  out.row.method = std::string(MethodName(method));
  out.row.seed = seed;
  out.row.outer_iters = static_cast<int>(solved.trace.outer.size());
  FillMetrics(out.row, solved.point, channels, cfg);
  out.trace = std::move(solved.trace);
  out.point = std::move(solved.point);
  out.row.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

std::vector<ResultRow> RunCampaign(const ExperimentPlan& plan, const CampaignOptions& options) {
  plan.Validate();
  const std::vector<double> values = plan.Cells();
  std::vector<Cell> cells;
  for (Method method : plan.methods) {
    for (std::uint32_t v = 0; v < values.size(); ++v) {
      for (std::uint32_t trial = 0; trial < static_cast<std::uint32_t>(plan.n_trials); ++trial) {
        cells.push_back(Cell{method, v, values[v], trial});
      }
    }
  }

  std::vector<std::optional<ResultRow>> results(cells.size());
  std::mutex sink_mutex;
  std::size_t next_flush = 0;
  std::atomic<std::size_t> next_cell{0};

  if (options.row_sink != nullptr) {
    WriteRowsHeader(*options.row_sink);
  }
  if (options.timing_sink != nullptr) {
    WriteTimingHeader(*options.timing_sink);
  }

  const auto worker = [&]() {
    for (std::size_t index = next_cell++; index < cells.size(); index = next_cell++) {
      const Cell& cell = cells[index];
      const std::uint64_t seed = TrialSeed(plan.master_seed, cell.trial);
      ResultRow row;
      try {
        const ScenarioConfig cfg = ApplySweep(plan.scenario, plan.sweep_axis, cell.value);
        row = RunSingle(cfg, plan.hyper, seed, cell.method).row;
      } catch (const std::exception& e) {
        row = ResultRow{};
        row.method = std::string(MethodName(cell.method));
        row.seed = seed;
        row.min_sinr_db = row.min_scnr_db = std::numeric_limits<double>::quiet_NaN();
        row.status = std::string("error: ") + e.what();
        std::replace(row.status.begin(), row.status.end(), ',', ';');
        std::replace(row.status.begin(), row.status.end(), '\n', ' ');
      }
      row.sweep_value = cell.value;
      row.trial = static_cast<int>(cell.trial);

      const std::lock_guard lock(sink_mutex);
      results[index] = std::move(row);
      while (next_flush < results.size() && results[next_flush].has_value()) {
        if (options.row_sink != nullptr) {
          WriteRow(*options.row_sink, *results[next_flush]);
          options.row_sink->flush();
        }
        if (options.timing_sink != nullptr) {
          WriteTiming(*options.timing_sink, *results[next_flush]);
        }
        ++next_flush;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(options.workers, static_cast<int>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }

  std::vector<ResultRow> rows;
  rows.reserve(results.size());
  for (auto& r : results) {
    rows.push_back(std::move(*r));
  }
  return rows;
}

std::vector<ResultRow> SweepTradeoff(const ScenarioConfig& base, const Hyperparams& hyper,
                                     const std::vector<double>& rho_values, int n_trials,
                                     std::uint64_t master_seed, const CampaignOptions& options) {
  for (double rho : rho_values) {
    if (!(rho >= 0.0 && rho <= 1.0)) {
      throw ConfigError("trade-off weights must lie in [0, 1]");
    }
  }
  ExperimentPlan plan;
  plan.scenario = base;
  plan.hyper = hyper;
  plan.sweep_axis = SweepAxis::kRho;
  plan.sweep_values = rho_values;
  plan.n_trials = n_trials;
  plan.methods = {Method::kEpPrmgd};
  plan.master_seed = master_seed;
  return RunCampaign(plan, options);
}

std::vector<SummaryRow> Summarize(const std::vector<ResultRow>& rows) {
  if (rows.empty()) {
    throw DomainError("cannot summarize an empty result table");
  }
  struct Group {
    std::string method;
    double value;
    std::vector<double> sinr;
    std::vector<double> scnr;
  };
  std::vector<Group> groups;
  for (const ResultRow& row : rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.method == row.method && g.value == row.sweep_value;
    });
    if (it == groups.end()) {
      groups.push_back(Group{row.method, row.sweep_value, {}, {}});
      it = std::prev(groups.end());
    }
    if (row.status == "ok") {
      it->sinr.push_back(row.min_sinr_db);
      it->scnr.push_back(row.min_scnr_db);
    }
  }
  std::vector<SummaryRow> summary;
  for (const Group& g : groups) {
    SummaryRow s;
    s.method = g.method;
    s.sweep_value = g.value;
    s.count = static_cast<int>(g.sinr.size());
    if (s.count > 0) {
      s.mean_min_sinr_db = stats::Mean(g.sinr);
      s.stderr_min_sinr_db = stats::StandardError(g.sinr);
      s.mean_min_scnr_db = stats::Mean(g.scnr);
      s.stderr_min_scnr_db = stats::StandardError(g.scnr);
    } else {
      s.mean_min_sinr_db = s.stderr_min_sinr_db = std::numeric_limits<double>::quiet_NaN();
      s.mean_min_scnr_db = s.stderr_min_scnr_db = std::numeric_limits<double>::quiet_NaN();
    }
    summary.push_back(s);
  }
  return summary;
}

void WriteRowsHeader(std::ostream& out) {
  out << "method,sweep_value,trial,seed,min_sinr_db,min_scnr_db,final_a,final_b,v_max_final,"
         "outer_iters,status\n";
}

void WriteRow(std::ostream& out, const ResultRow& row) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << row.method << ',' << row.sweep_value << ',' << row.trial << ',' << row.seed << ','
      << row.min_sinr_db << ',' << row.min_scnr_db << ',' << row.final_a << ',' << row.final_b
      << ',' << row.v_max_final << ',' << row.outer_iters << ',' << row.status << '\n';
  out.precision(old_precision);
}

void WriteTimingHeader(std::ostream& out) { out << "method,sweep_value,trial,wall_time_s\n"; }

void WriteTiming(std::ostream& out, const ResultRow& row) {
  out << row.method << ',' << row.sweep_value << ',' << row.trial << ',' << row.wall_time_s << '\n';
}

std::vector<ResultRow> ReadRows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return {};
  }
  std::vector<ResultRow> rows;
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 11) {
      throw ConfigError("rows CSV line " + std::to_string(line_number) + ": expected 11 fields");
    }
    try {
      ResultRow row;
      row.method = f[0];
      row.sweep_value = std::stod(f[1]);
      row.trial = std::stoi(f[2]);
      row.seed = std::stoull(f[3]);
      row.min_sinr_db = std::stod(f[4]);
      row.min_scnr_db = std::stod(f[5]);
      row.final_a = std::stod(f[6]);
      row.final_b = std::stod(f[7]);
      row.v_max_final = std::stod(f[8]);
      row.outer_iters = std::stoi(f[9]);
      row.status = f[10];
      rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ConfigError("rows CSV line " + std::to_string(line_number) + ": malformed number");
    }
  }
  return rows;
}

void WriteSummary(std::ostream& out, const std::vector<SummaryRow>& summary) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "method,sweep_value,count,mean_min_sinr_db,stderr_min_sinr_db,mean_min_scnr_db,"
         "stderr_min_scnr_db\n";
  for (const SummaryRow& s : summary) {
    out << s.method << ',' << s.sweep_value << ',' << s.count << ',' << s.mean_min_sinr_db << ','
        << s.stderr_min_sinr_db << ',' << s.mean_min_scnr_db << ',' << s.stderr_min_scnr_db
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace polarisac
