#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "polarisac/manifold.hpp"
#include "polarisac/objective.hpp"

namespace polarisac {

// Complex blocks follow the convention d(phi) = Re<G, dX> = Re Tr(G^H dX), so that
// for example the gradient of |h^H w|^2 with respect to w is 2 h (h^H w).

/// Chain-rule weights of the smoothed penalty:
/// alpha_k = lambda * logistic((a - SINR_k) / mu), beta_t = lambda * logistic((b - SCNR_t) / mu).
struct GradientWeights {
  std::vector<double> alpha;
  std::vector<double> beta;
};

GradientWeights ComputeGradientWeights(const ProductPoint& x, const EffectiveLinks& links,
                                       double lambda, double mu);
GradientWeights ComputeGradientWeights(const ProductPoint& x, const ChannelSet& channels,
                                       const ScenarioConfig& cfg, double lambda, double mu);

/// -sum_k alpha_k grad_W SINR_k - sum_t beta_t grad_W SCNR_t.
CMatrix GradW(const ProductPoint& x, const EffectiveLinks& links, const GradientWeights& weights,
              const ScenarioConfig& cfg);

/// Column t: -beta_t grad_{f_t} SCNR_t. Zero column when f_t = 0.
CMatrix GradF(const ProductPoint& x, const EffectiveLinks& links, const GradientWeights& weights,
              const ScenarioConfig& cfg);

/// Gradient with respect to the combiner of user k. Requires links with gradient terms.
Eigen::Vector2d GradPUser(const ProductPoint& x, const ChannelSet& channels,
                          const EffectiveLinks& links, const GradientWeights& weights,
                          const ScenarioConfig& cfg, int k);

/// Gradient with respect to transmit element m (communication and sensing parts).
Eigen::Vector2d GradPTx(const ProductPoint& x, const ChannelSet& channels,
                        const EffectiveLinks& links, const GradientWeights& weights,
                        const ScenarioConfig& cfg, int m);

/// Gradient with respect to receive element m (sensing only).
Eigen::Vector2d GradPRx(const ProductPoint& x, const ChannelSet& channels,
                        const EffectiveLinks& links, const GradientWeights& weights,
                        const ScenarioConfig& cfg, int m);

/// (d phi / d a, d phi / d b).
std::pair<double, double> GradAb(const ProductPoint& x, const ChannelSet& channels,
                                 const ScenarioConfig& cfg, double lambda, double mu);

/// Gradient of -sum_k alpha_k SINR_k - sum_t beta_t SCNR_t over the W, polarization and F
/// blocks for arbitrary weights; the a and b blocks are left at zero.
Blocks MetricGradient(const ProductPoint& x, const ChannelSet& channels, const EffectiveLinks& links,
                      const GradientWeights& weights, const ScenarioConfig& cfg);

/// Full Euclidean gradient of the smoothed penalized objective.
Blocks EuclideanGradient(const ProductPoint& x, const ChannelSet& channels,
                         const ScenarioConfig& cfg, double lambda, double mu);

/// Projection of the Euclidean gradient onto the tangent space at x.
TangentVector RiemannianGradient(const ProductPoint& x, const ChannelSet& channels,
                                 const ScenarioConfig& cfg, double lambda, double mu);

using ScalarField = std::function<double(const ProductPoint&)>;

/// Central differences of `fn` over every real degree of freedom. Complex entries get
/// d/dRe + j d/dIm, matching the gradient convention above.
Blocks FiniteDifferenceGradient(const ScalarField& fn, const ProductPoint& x, double h = 1e-6);

/// Finite-difference gradient of the smoothed penalized objective.
Blocks FiniteDifferenceGradient(const ProductPoint& x, const ChannelSet& channels,
                                const ScenarioConfig& cfg, double lambda, double mu,
                                double h = 1e-6);

struct BlockError {
  std::string block;
  double analytic_norm = 0.0;
  double reference_norm = 0.0;
  /// ||analytic - reference|| / max(||analytic||, ||reference||); 0 when both vanish.
  double relative_error = 0.0;
};

/// Per-block comparison in the order w, p_tx, p_rx, p_users, f, a, b.
std::vector<BlockError> CompareBlocks(const Blocks& analytic, const Blocks& reference);

/// RandomPoint(cfg, seed) with a and b moved onto min SINR and min SCNR, so that the
/// binding link of each kind sits in the middle of its smoothing band and no gradient
/// block degenerates to zero.
ProductPoint GradientCheckPoint(const ScenarioConfig& cfg, const ChannelSet& channels,
                                std::uint64_t seed);

}  // namespace polarisac
