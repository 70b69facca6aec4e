#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "polarisac/types.hpp"

namespace polarisac {

/// System dimensions, powers and channel statistics of one experiment.
///
/// Powers are given in dBm and converted to watts once through the accessors below;
/// everything downstream works in linear scale. The metrics only depend on P / sigma^2,
/// but the optimizer does not: the W block lives on a sphere of radius sqrt(P) and
/// shares one step size with a and b.
struct ScenarioConfig {
  int m_tx = 32;
  int m_rx = 32;
  int n_users = 8;
  int n_radar_streams = 16;
  int n_targets = 8;
  int n_clutter = 8;
  double power_dbm = 30.0;
  double noise_user_dbm = 20.0;
  double noise_radar_dbm = 20.0;
  double rho = 0.5;
  int n_paths = 6;
  double xpd = 0.1;
  double element_spacing_wavelengths = 0.5;
  std::uint64_t seed = 0;

  /// Full-size setting (32 antennas, 8 users, 16 radar streams, 8 targets, 8 clutter).
  static ScenarioConfig Paper();
  /// Reduced setting used for desk-scale campaigns and the acceptance suite.
  static ScenarioConfig Desk();

  /// Throws ConfigError naming the first invalid field.
  void Validate() const;

  int n_streams() const { return n_users + n_radar_streams; }
  int n_objects() const { return n_targets + n_clutter; }
  double power() const { return DbmToWatts(power_dbm); }
  /// Noise power of user k. All users share one configured value.
  double noise_user(int /*k*/) const { return DbmToWatts(noise_user_dbm); }
  double noise_radar() const { return DbmToWatts(noise_radar_dbm); }
};

/// One propagation path: angle (rad), complex gain and the four polarization
/// phase shifts ordered HH, HV, VH, VV.
struct PathRealization {
  double angle = 0.0;
  Complex gain{1.0, 0.0};
  std::array<double, 4> phases{0.0, 0.0, 0.0, 0.0};
};

/// Realized channels of one Monte-Carlo draw. Immutable once built.
struct ChannelSet {
  /// K matrices, 2 x 2*M_tx.
  std::vector<CMatrix> comm;
  /// T + C matrices, 2*M_rx x 2*M_tx. Targets first, then clutter.
  std::vector<CMatrix> sensing;
  std::vector<double> object_angles;
};

/// Uniform linear array response, entry i = exp(-j 2 pi spacing i sin(theta)).
CVector SteeringVector(int m, double spacing, double theta);

/// Cross-polar leakage matrix (1+xpd)^{-1/2} [[e^{j a_HH}, sqrt(xpd) e^{j a_HV}],
/// [sqrt(xpd) e^{j a_VH}, e^{j a_VV}]].
Eigen::Matrix2cd DepolarizationMatrix(double xpd, const std::array<double, 4>& phases);

/// steering (x) I_2, a 2m x 2 matrix.
CMatrix FieldResponseMatrix(const CVector& steering);

/// H_k = L^{-1/2} sum_l beta_l J_l A^T(theta_l); shape 2 x 2*M_tx.
CMatrix BuildCommChannel(const ScenarioConfig& cfg, const std::vector<PathRealization>& paths);

/// G_q = beta A_rx(theta) J A_tx^T(theta); shape 2*M_rx x 2*M_tx.
CMatrix BuildSensingChannel(const ScenarioConfig& cfg, const PathRealization& path);

/// Draws every channel of the scenario from cfg.seed. Angles ~ U(-pi/2, pi/2),
/// gains ~ CN(0, 1), phases ~ U(0, 2 pi). Pure function of cfg.
ChannelSet SampleScenario(const ScenarioConfig& cfg);

}  // namespace polarisac
