#include "polarisac/config_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "polarisac/errors.hpp"

namespace polarisac {

namespace {

using nlohmann::json;

template <typename T>
void Read(const json& section, const char* section_name, const char* key, T& field) {
  const auto it = section.find(key);
  if (it == section.end()) {
    return;
  }
  try {
    field = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section_name) + "." + key + " has the wrong type");
  }
}

void RejectUnknown(const json& section, const char* section_name,
                   std::initializer_list<const char*> known) {
  if (!section.is_object()) {
    throw ConfigError(std::string(section_name) + " must be an object");
  }
  for (const auto& [key, value] : section.items()) {
    bool found = false;
    for (const char* k : known) {
      found = found || key == k;
    }
    if (!found) {
      throw ConfigError("unknown key '" + key + "' in " + section_name);
    }
  }
}

ScenarioConfig ReadScenario(const json& s, ScenarioConfig cfg) {
  constexpr const char* kName = "scenario";
  RejectUnknown(s, kName,
                {"m_tx", "m_rx", "n_users", "n_radar_streams", "n_targets", "n_clutter",
                 "power_dbm", "noise_user_dbm", "noise_radar_dbm", "rho", "n_paths", "xpd",
                 "element_spacing_wavelengths", "seed"});
  Read(s, kName, "m_tx", cfg.m_tx);
  Read(s, kName, "m_rx", cfg.m_rx);
  Read(s, kName, "n_users", cfg.n_users);
  Read(s, kName, "n_radar_streams", cfg.n_radar_streams);
  Read(s, kName, "n_targets", cfg.n_targets);
  Read(s, kName, "n_clutter", cfg.n_clutter);
  Read(s, kName, "power_dbm", cfg.power_dbm);
  Read(s, kName, "noise_user_dbm", cfg.noise_user_dbm);
  Read(s, kName, "noise_radar_dbm", cfg.noise_radar_dbm);
  Read(s, kName, "rho", cfg.rho);
  Read(s, kName, "n_paths", cfg.n_paths);
  Read(s, kName, "xpd", cfg.xpd);
  Read(s, kName, "element_spacing_wavelengths", cfg.element_spacing_wavelengths);
  Read(s, kName, "seed", cfg.seed);
  return cfg;
}

Hyperparams ReadHyper(const json& s, Hyperparams h) {
  constexpr const char* kName = "hyperparams";
  RejectUnknown(s, kName,
                {"lambda0", "mu0", "eps0", "sigma0", "decay_lambda", "decay_mu", "decay_eps",
                 "decay_sigma", "mu_min", "eps_min", "sigma_min", "o_tol", "i_inner", "i_outer",
                 "armijo_c", "armijo_beta", "tau_init0", "max_backtracks"});
  Read(s, kName, "lambda0", h.lambda0);
  Read(s, kName, "mu0", h.mu0);
  Read(s, kName, "eps0", h.eps0);
  Read(s, kName, "sigma0", h.sigma0);
  Read(s, kName, "decay_lambda", h.decay_lambda);
  Read(s, kName, "decay_mu", h.decay_mu);
  Read(s, kName, "decay_eps", h.decay_eps);
  Read(s, kName, "decay_sigma", h.decay_sigma);
  Read(s, kName, "mu_min", h.mu_min);
  Read(s, kName, "eps_min", h.eps_min);
  Read(s, kName, "sigma_min", h.sigma_min);
  Read(s, kName, "o_tol", h.o_tol);
  Read(s, kName, "i_inner", h.i_inner);
  Read(s, kName, "i_outer", h.i_outer);
  Read(s, kName, "armijo_c", h.armijo_c);
  Read(s, kName, "armijo_beta", h.armijo_beta);
  Read(s, kName, "tau_init0", h.tau_init0);
  Read(s, kName, "max_backtracks", h.max_backtracks);
  return h;
}

json ParseDocument(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config document: ") + e.what());
  }
}

RunConfig ReadRunSections(const json& doc, const RunConfig& defaults) {
  RunConfig out = defaults;
  if (const auto it = doc.find("scenario"); it != doc.end()) {
    out.scenario = ReadScenario(*it, defaults.scenario);
  }
  if (const auto it = doc.find("hyperparams"); it != doc.end()) {
    out.hyper = ReadHyper(*it, defaults.hyper);
  }
  out.scenario.Validate();
  out.hyper.Validate();
  return out;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

RunConfig ParseRunConfig(std::string_view text, const RunConfig& defaults) {
  const json doc = ParseDocument(text);
  RejectUnknown(doc, "document", {"scenario", "hyperparams"});
  return ReadRunSections(doc, defaults);
}

RunConfig LoadRunConfig(const std::filesystem::path& path, const RunConfig& defaults) {
  return ParseRunConfig(Slurp(path), defaults);
}

ExperimentPlan ParsePlan(std::string_view text, const RunConfig& defaults) {
  const json doc = ParseDocument(text);
  RejectUnknown(doc, "plan",
                {"scenario", "hyperparams", "sweep", "n_trials", "methods", "master_seed",
                 "output_dir"});
  const RunConfig run = ReadRunSections(doc, defaults);
  ExperimentPlan plan;
  plan.scenario = run.scenario;
  plan.hyper = run.hyper;
  if (const auto it = doc.find("sweep"); it != doc.end()) {
    RejectUnknown(*it, "sweep", {"axis", "values"});
    std::string axis = "none";
    Read(*it, "sweep", "axis", axis);
    plan.sweep_axis = ParseSweepAxis(axis);
    Read(*it, "sweep", "values", plan.sweep_values);
  }
  Read(doc, "plan", "n_trials", plan.n_trials);
  if (const auto it = doc.find("methods"); it != doc.end()) {
    std::vector<std::string> names;
    Read(doc, "plan", "methods", names);
    plan.methods.clear();
    for (const std::string& name : names) {
      plan.methods.push_back(ParseMethod(name));
    }
  }
  Read(doc, "plan", "master_seed", plan.master_seed);
  Read(doc, "plan", "output_dir", plan.output_dir);
  plan.Validate();
  return plan;
}

ExperimentPlan LoadPlan(const std::filesystem::path& path, const RunConfig& defaults) {
  return ParsePlan(Slurp(path), defaults);
}

}  // namespace polarisac
