#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "polarisac/campaign.hpp"
#include "polarisac/config_io.hpp"
#include "polarisac/errors.hpp"
#include "polarisac/report.hpp"
#include "polarisac/stats.hpp"

using namespace polarisac;

namespace {

ExperimentPlan TinyPlan() {
  ExperimentPlan plan;
  plan.scenario.m_tx = plan.scenario.m_rx = 4;
  plan.scenario.n_users = 2;
  plan.scenario.n_radar_streams = 2;
  plan.scenario.n_targets = 2;
  plan.scenario.n_clutter = 1;
  plan.hyper.i_outer = 3;
  plan.hyper.i_inner = 10;
  plan.n_trials = 2;
  return plan;
}

ResultRow Row(const std::string& method, double value, int trial, double sinr, double scnr) {
  ResultRow r;
  r.method = method;
  r.sweep_value = value;
  r.trial = trial;
  r.min_sinr_db = sinr;
  r.min_scnr_db = scnr;
  return r;
}

}  // namespace

TEST(Stats, MeanAndStandardError) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(stats::Mean(x), 2.5);
  EXPECT_NEAR(stats::StandardError(x), std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(stats::StandardError(std::vector<double>{7.0}), 0.0);
  EXPECT_THROW(stats::Mean(std::vector<double>{}), DomainError);
}

TEST(Stats, PairedTTest) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{0.5, 2.1, 2.0, 3.5, 4.4};
  const stats::PairedTest t = stats::PairedTTestGreater(x, y);
  EXPECT_NEAR(t.t_statistic, 2.8398091712353235, 1e-12);
  EXPECT_NEAR(t.p_value, 0.023438345733406325, 1e-12);
  EXPECT_NEAR(t.mean_difference, 0.5, 1e-15);
  EXPECT_EQ(t.n, 5);
  EXPECT_GT(stats::PairedTTestGreater(y, x).p_value, 0.95);
  EXPECT_THROW(stats::PairedTTestGreater(x, std::vector<double>{1.0}), DomainError);
}

TEST(Stats, RanksAndSpearman) {
  EXPECT_EQ(stats::Ranks(std::vector<double>{3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
  const std::vector<double> x{1, 2, 2, 3, 5};
  const std::vector<double> y{2, 1, 4, 4, 9};
  EXPECT_NEAR(stats::Spearman(x, y), 0.7631578947368421, 1e-12);
  const std::vector<double> up{1, 2, 3, 4};
  const std::vector<double> down{9, 7, 5, -1};
  EXPECT_NEAR(stats::Spearman(up, down), -1.0, 1e-15);
}

TEST(Names, RoundTrip) {
  for (Method m : {Method::kEpPrmgd, Method::kFixedPolarization, Method::kSumObjective})
    EXPECT_EQ(ParseMethod(MethodName(m)), m);
  EXPECT_EQ(MethodName(Method::kFixedPolarization), "fp_fb");
  EXPECT_EQ(ParseSweepAxis("snr_db"), SweepAxis::kSnrDb);
  EXPECT_EQ(SweepAxisName(SweepAxis::kRho), "rho");
  EXPECT_THROW(ParseMethod("gradient"), ConfigError);
  EXPECT_THROW(ParseSweepAxis("bandwidth"), ConfigError);
}

TEST(Sweep, AppliesAxis) {
  const ScenarioConfig base = ScenarioConfig::Desk();
  EXPECT_EQ(ApplySweep(base, SweepAxis::kAntennas, 16).m_rx, 16);
  EXPECT_EQ(ApplySweep(base, SweepAxis::kAntennas, 16).m_tx, 16);
  const ScenarioConfig snr = ApplySweep(base, SweepAxis::kSnrDb, -6);
  EXPECT_DOUBLE_EQ(snr.power_dbm, base.noise_user_dbm - 6);
  EXPECT_DOUBLE_EQ(snr.noise_user_dbm, base.noise_user_dbm);
  EXPECT_EQ(ApplySweep(base, SweepAxis::kUsers, 6).n_users, 6);
  EXPECT_EQ(ApplySweep(base, SweepAxis::kUsers, 6).n_radar_streams, base.n_radar_streams);
  EXPECT_EQ(ApplySweep(base, SweepAxis::kTargets, 2).n_targets, 2);
  EXPECT_DOUBLE_EQ(ApplySweep(base, SweepAxis::kRho, 0.3).rho, 0.3);
  EXPECT_THROW(ApplySweep(base, SweepAxis::kUsers, 2.5), ConfigError);
  EXPECT_THROW(ApplySweep(base, SweepAxis::kRho, 1.5), ConfigError);
}

TEST(Plan, Validation) {
  ExperimentPlan plan;
  EXPECT_NO_THROW(plan.Validate());
  EXPECT_EQ(plan.Cells(), std::vector<double>{0.0});
  plan.sweep_axis = SweepAxis::kRho;
  EXPECT_THROW(plan.Validate(), ConfigError);
  plan.sweep_values = {0.1, 0.2};
  EXPECT_NO_THROW(plan.Validate());
  plan.n_trials = 0;
  EXPECT_THROW(plan.Validate(), ConfigError);
  plan.n_trials = 1;
  plan.methods.clear();
  EXPECT_THROW(plan.Validate(), ConfigError);
}

TEST(Seeds, DistinctAcrossTrials) {
  std::set<std::uint64_t> seen;
  for (std::uint32_t t = 0; t < 10000; ++t) seen.insert(TrialSeed(1, t));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(TrialSeed(1, 0), TrialSeed(2, 0));
}

TEST(Campaign, OneRow) {
  ExperimentPlan plan = TinyPlan();
  plan.n_trials = 1;
  const auto rows = RunCampaign(plan);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].status, "ok");
  EXPECT_EQ(rows[0].method, "ep_prmgd");
  EXPECT_EQ(rows[0].seed, TrialSeed(plan.master_seed, 0));
  EXPECT_GE(rows[0].v_max_final, 0.0);
  EXPECT_EQ(rows[0].outer_iters, 3);
}

TEST(Campaign, RowCountAndOrder) {
  ExperimentPlan plan = TinyPlan();
  plan.methods = {Method::kEpPrmgd, Method::kFixedPolarization, Method::kSumObjective};
  plan.sweep_axis = SweepAxis::kRho;
  plan.sweep_values = {0.2, 0.8};
  std::ostringstream sink;
  CampaignOptions options;
  options.workers = 3;
  options.row_sink = &sink;
  const auto rows = RunCampaign(plan, options);
  ASSERT_EQ(rows.size(), 3u * 2u * 2u);
  EXPECT_EQ(rows[0].method, "ep_prmgd");
  EXPECT_EQ(rows[4].method, "fp_fb");
  EXPECT_EQ(rows[1].trial, 1);
  EXPECT_DOUBLE_EQ(rows[2].sweep_value, 0.8);
  // Common random numbers: every cell of a trial shares its seed.
  EXPECT_EQ(rows[0].seed, rows[2].seed);
  EXPECT_EQ(rows[0].seed, rows[4].seed);
  std::istringstream in(sink.str());
  const auto parsed = ReadRows(in);
  ASSERT_EQ(parsed.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(parsed[i].method, rows[i].method);
    EXPECT_EQ(parsed[i].min_sinr_db, rows[i].min_sinr_db);
    EXPECT_EQ(parsed[i].seed, rows[i].seed);
  }
}

TEST(Campaign, SingleRunReproducible) {
  const ExperimentPlan plan = TinyPlan();
  const RunOutput a = RunSingle(plan.scenario, plan.hyper, 99, Method::kFixedPolarization);
  const RunOutput b = RunSingle(plan.scenario, plan.hyper, 99, Method::kFixedPolarization);
  EXPECT_EQ(a.row.min_sinr_db, b.row.min_sinr_db);
  EXPECT_EQ(a.row.final_a, b.row.final_a);
  EXPECT_TRUE(a.point == b.point);
  const Eigen::Vector2d p = DiagonalPolarization();
  for (int m = 0; m < a.point.p_tx.cols(); ++m) EXPECT_TRUE(a.point.p_tx.col(m) == p);
}

TEST(Rows, RoundTrip) {
  ResultRow r = Row("pr_wofb", 0.1, 7, -3.25, 1.0 / 3.0);
  r.seed = 0xfedcba9876543210ull;
  r.final_a = 1e-300;
  r.v_max_final = 0.0;
  r.outer_iters = 25;
  r.status = "nonfinite";
  std::stringstream buffer;
  WriteRowsHeader(buffer);
  WriteRow(buffer, r);
  const auto rows = ReadRows(buffer);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].seed, r.seed);
  EXPECT_EQ(rows[0].sweep_value, r.sweep_value);
  EXPECT_EQ(rows[0].min_scnr_db, r.min_scnr_db);
  EXPECT_EQ(rows[0].final_a, r.final_a);
  EXPECT_EQ(rows[0].outer_iters, 25);
  EXPECT_EQ(rows[0].status, "nonfinite");
  std::istringstream bad("method,sweep_value\nep_prmgd,1\n");
  EXPECT_THROW(ReadRows(bad), ConfigError);
}

TEST(Summary, HandComputed) {
  const std::vector<ResultRow> rows{Row("ep_prmgd", 0, 0, 1.0, 4.0), Row("ep_prmgd", 0, 1, 2.0, 4.0),
                                    Row("ep_prmgd", 0, 2, 6.0, 4.0), Row("fp_fb", 0, 0, -1.0, 2.0)};
  const auto s = Summarize(rows);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].method, "ep_prmgd");
  EXPECT_EQ(s[0].count, 3);
  EXPECT_DOUBLE_EQ(s[0].mean_min_sinr_db, 3.0);
  // Sample variance (4 + 1 + 9) / 2 = 7.
  EXPECT_NEAR(s[0].stderr_min_sinr_db, std::sqrt(7.0 / 3.0), 1e-15);
  EXPECT_DOUBLE_EQ(s[0].mean_min_scnr_db, 4.0);
  EXPECT_EQ(s[0].stderr_min_scnr_db, 0.0);
  EXPECT_EQ(s[1].count, 1);
  EXPECT_EQ(s[1].stderr_min_sinr_db, 0.0);
  EXPECT_DOUBLE_EQ(s[1].mean_min_sinr_db, -1.0);
  EXPECT_THROW(Summarize({}), DomainError);
}

TEST(Summary, SkipsFailedRows) {
  std::vector<ResultRow> rows{Row("ep_prmgd", 0, 0, 1.0, 4.0), Row("ep_prmgd", 0, 1, 100.0, 4.0)};
  rows[1].status = "error: boom";
  const auto s = Summarize(rows);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].count, 1);
  EXPECT_DOUBLE_EQ(s[0].mean_min_sinr_db, 1.0);
}

TEST(Config, ParsesSectionsAndRejectsUnknownKeys) {
  const RunConfig defaults{ScenarioConfig::Desk(), Hyperparams::Desk()};
  const RunConfig cfg = ParseRunConfig(
      R"({"scenario": {"m_tx": 16, "rho": 0.25}, "hyperparams": {"i_inner": 30}})", defaults);
  EXPECT_EQ(cfg.scenario.m_tx, 16);
  EXPECT_EQ(cfg.scenario.m_rx, 8);
  EXPECT_DOUBLE_EQ(cfg.scenario.rho, 0.25);
  EXPECT_EQ(cfg.hyper.i_inner, 30);
  EXPECT_DOUBLE_EQ(cfg.hyper.lambda0, Hyperparams::Desk().lambda0);
  EXPECT_THROW(ParseRunConfig(R"({"scenario": {"m_txx": 16}})", defaults), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"solver": {}})", defaults), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"scenario": {"m_tx": "many"}})", defaults), ConfigError);
  EXPECT_THROW(ParseRunConfig(R"({"scenario": )", defaults), ConfigError);
}

TEST(Config, ParsesPlan) {
  const RunConfig defaults{ScenarioConfig::Desk(), Hyperparams::Desk()};
  const ExperimentPlan plan = ParsePlan(
      R"({"sweep": {"axis": "antennas", "values": [8, 16]}, "n_trials": 30,
          "methods": ["ep_prmgd", "fp_fb"], "master_seed": 5, "output_dir": "x"})",
      defaults);
  EXPECT_EQ(plan.sweep_axis, SweepAxis::kAntennas);
  EXPECT_EQ(plan.sweep_values, (std::vector<double>{8, 16}));
  EXPECT_EQ(plan.n_trials, 30);
  ASSERT_EQ(plan.methods.size(), 2u);
  EXPECT_EQ(plan.methods[1], Method::kFixedPolarization);
  EXPECT_EQ(plan.master_seed, 5u);
  EXPECT_EQ(plan.output_dir, "x");
  EXPECT_THROW(ParsePlan(R"({"trials": 3})", defaults), ConfigError);
}

TEST(Report, JsonLinesAndMetricCsv) {
  InnerRecord inner;
  inner.outer = 2;
  inner.tau = 0.5;
  const std::string line = ToJsonLine(inner);
  EXPECT_NE(line.find("\"kind\":\"inner\""), std::string::npos);
  EXPECT_NE(line.find("\"tau\":0.5"), std::string::npos);
  EXPECT_EQ(line.find('\n'), std::string::npos);

  SolveTrace trace;
  trace.inner = {inner, inner};
  OuterRecord outer;
  outer.outer = 2;
  trace.outer = {outer};
  std::ostringstream out;
  WriteTrace(out, trace);
  const std::string text = out.str();
  EXPECT_LT(text.rfind("\"kind\":\"inner\""), text.find("\"kind\":\"outer\""));

  MetricReport m;
  m.sinr = {10.0, 100.0};
  m.scnr = {1.0};
  m.min_sinr = 10.0;
  m.min_scnr = 1.0;
  std::ostringstream csv;
  WriteMetricHeader(csv, 2, 1, true);
  WriteMetricRow(csv, 3, 4, m, true);
  EXPECT_EQ(csv.str(), "trial,iteration,min_sinr_db,min_scnr_db,sinr_db_0,sinr_db_1,scnr_db_0\n"
                       "3,4,10,0,10,20,0\n");
}
