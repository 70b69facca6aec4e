#include "polarisac/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "polarisac/errors.hpp"
#include "polarisac/rng.hpp"

namespace polarisac {

namespace {

constexpr std::uint64_t kCommStream = 1;
constexpr std::uint64_t kSensingStream = 2;

void RequireAtLeast(const char* field, int value, int minimum) {
  if (value < minimum) {
    throw ConfigError(std::string(field) + " must be >= " + std::to_string(minimum) + ", got " +
                      std::to_string(value));
  }
}

PathRealization DrawPath(RandomStream& rng) {
  PathRealization path;
  // (-pi/2, pi/2): reject the closed endpoint, which has probability 2^-53 anyway.
  do {
    path.angle = rng.Uniform(-std::numbers::pi / 2, std::numbers::pi / 2);
  } while (path.angle <= -std::numbers::pi / 2);
  path.gain = rng.ComplexNormal(1.0);
  for (double& phase : path.phases) {
    phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  }
  return path;
}

}  // namespace

ScenarioConfig ScenarioConfig::Paper() { return ScenarioConfig{}; }

ScenarioConfig ScenarioConfig::Desk() {
  ScenarioConfig cfg;
  cfg.m_tx = 8;
  cfg.m_rx = 8;
  cfg.n_users = 4;
  cfg.n_radar_streams = 4;
  cfg.n_targets = 4;
  cfg.n_clutter = 4;
  return cfg;
}

void ScenarioConfig::Validate() const {
  RequireAtLeast("m_tx", m_tx, 1);
  RequireAtLeast("m_rx", m_rx, 1);
  RequireAtLeast("n_users", n_users, 1);
  RequireAtLeast("n_radar_streams", n_radar_streams, 1);
  RequireAtLeast("n_targets", n_targets, 1);
  RequireAtLeast("n_clutter", n_clutter, 0);
  RequireAtLeast("n_paths", n_paths, 1);
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw ConfigError("rho must lie in [0, 1], got " + std::to_string(rho));
  }
  if (!(xpd >= 0.0) || !std::isfinite(xpd)) {
    throw ConfigError("xpd must be >= 0, got " + std::to_string(xpd));
  }
  if (!(element_spacing_wavelengths > 0.0) || !std::isfinite(element_spacing_wavelengths)) {
    throw ConfigError("element_spacing_wavelengths must be > 0");
  }
  for (auto [name, value] : {std::pair{"power_dbm", power_dbm}, {"noise_user_dbm", noise_user_dbm},
                             {"noise_radar_dbm", noise_radar_dbm}}) {
    const double linear = DbmToWatts(value);
    if (!std::isfinite(value) || !(linear > 0.0) || !std::isfinite(linear)) {
      throw ConfigError(std::string(name) + " does not map to a positive finite power");
    }
  }
}

CVector SteeringVector(int m, double spacing, double theta) {
  if (m <= 0) {
    throw DimensionError("steering vector needs at least one antenna");
  }
  CVector a(m);
  const double phase_step = -2.0 * std::numbers::pi * spacing * std::sin(theta);
  for (int i = 0; i < m; ++i) {
    a(i) = std::polar(1.0, phase_step * i);
  }
  return a;
}

Eigen::Matrix2cd DepolarizationMatrix(double xpd, const std::array<double, 4>& phases) {
  if (!(xpd >= 0.0)) {
    throw DomainError("xpd must be non-negative");
  }
  const double cross = std::sqrt(xpd);
  Eigen::Matrix2cd j;
  j << std::polar(1.0, phases[0]), std::polar(cross, phases[1]), std::polar(cross, phases[2]),
      std::polar(1.0, phases[3]);
  return j / std::sqrt(1.0 + xpd);
}

CMatrix FieldResponseMatrix(const CVector& steering) {
  const Eigen::Index m = steering.size();
  CMatrix a = CMatrix::Zero(2 * m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(2 * i, 0) = steering(i);
    a(2 * i + 1, 1) = steering(i);
  }
  return a;
}

CMatrix BuildCommChannel(const ScenarioConfig& cfg, const std::vector<PathRealization>& paths) {
  if (paths.empty()) {
    throw ScenarioError("communication link needs at least one path");
  }
  CMatrix h = CMatrix::Zero(2, 2 * cfg.m_tx);
  for (const PathRealization& path : paths) {
    const CMatrix a =
        FieldResponseMatrix(SteeringVector(cfg.m_tx, cfg.element_spacing_wavelengths, path.angle));
    h.noalias() += path.gain * DepolarizationMatrix(cfg.xpd, path.phases) * a.transpose();
  }
  return h / std::sqrt(static_cast<double>(paths.size()));
}

CMatrix BuildSensingChannel(const ScenarioConfig& cfg, const PathRealization& path) {
  const CMatrix a_tx =
      FieldResponseMatrix(SteeringVector(cfg.m_tx, cfg.element_spacing_wavelengths, path.angle));
  const CMatrix a_rx =
      FieldResponseMatrix(SteeringVector(cfg.m_rx, cfg.element_spacing_wavelengths, path.angle));
  return path.gain * (a_rx * DepolarizationMatrix(cfg.xpd, path.phases)) * a_tx.transpose();
}

ChannelSet SampleScenario(const ScenarioConfig& cfg) {
  cfg.Validate();
  ChannelSet set;
  set.comm.reserve(cfg.n_users);
  for (int k = 0; k < cfg.n_users; ++k) {
    std::vector<PathRealization> paths;
    paths.reserve(cfg.n_paths);
    for (int l = 0; l < cfg.n_paths; ++l) {
      RandomStream rng(DeriveSeed(cfg.seed, {kCommStream, static_cast<std::uint64_t>(k),
                                             static_cast<std::uint64_t>(l)}));
      paths.push_back(DrawPath(rng));
    }
    set.comm.push_back(BuildCommChannel(cfg, paths));
  }
  set.sensing.reserve(cfg.n_objects());
  for (int q = 0; q < cfg.n_objects(); ++q) {
    RandomStream rng(DeriveSeed(cfg.seed, {kSensingStream, static_cast<std::uint64_t>(q)}));
    const PathRealization path = DrawPath(rng);
    set.sensing.push_back(BuildSensingChannel(cfg, path));
    set.object_angles.push_back(path.angle);
  }
  return set;
}

}  // namespace polarisac
