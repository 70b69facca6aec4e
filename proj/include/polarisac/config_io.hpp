#pragma once

#include <filesystem>
#include <string_view>

#include "polarisac/campaign.hpp"
#include "polarisac/scenario.hpp"
#include "polarisac/solver.hpp"

namespace polarisac {

/// Scenario plus solver settings, read from a JSON document of the form
///
///   { "scenario": { "m_tx": 8, ... }, "hyperparams": { "lambda0": 0.08, ... } }
///
/// Keys mirror the ScenarioConfig and Hyperparams field names. Missing keys keep the
/// defaults passed in; unknown keys are rejected.
struct RunConfig {
  ScenarioConfig scenario;
  Hyperparams hyper;
};

RunConfig ParseRunConfig(std::string_view text, const RunConfig& defaults);
RunConfig LoadRunConfig(const std::filesystem::path& path, const RunConfig& defaults);

/// Experiment plan document: the run-config sections plus
///   "sweep": { "axis": "antennas", "values": [8, 16] }, "n_trials": 50,
///   "methods": ["ep_prmgd", "fp_fb", "pr_wofb"], "master_seed": 1, "output_dir": "out".
ExperimentPlan ParsePlan(std::string_view text, const RunConfig& defaults);
ExperimentPlan LoadPlan(const std::filesystem::path& path, const RunConfig& defaults);

}  // namespace polarisac
