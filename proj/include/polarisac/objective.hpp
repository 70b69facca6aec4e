#pragma once

#include <vector>

#include "polarisac/manifold.hpp"
#include "polarisac/scenario.hpp"

namespace polarisac {

/// Effective links and metric terms of one point, recomputed from scratch for every point.
///
/// With N = K + L_r streams:
///   h_eff.row(k)   = p_k^T H_k P_tx                    (1 x M_tx)
///   y.row(k)       = h_eff.row(k) * W                  (1 x N)
///   reduced[q]     = P_rx^T G_q P_tx                   (M_rx x M_tx)
///   s_mats[q]      = reduced[q] * W                    (M_rx x N)
///   z[t].row(q)    = f_t^H s_mats[q]                   (1 x N)
/// and, when gradient terms are requested,
///   user_streams[k] = H_k P_tx W                       (2 x N)
///   v_mats[q]       = G_q P_tx W                       (2 M_rx x N)
///   tx_reduced[q]   = P_rx^T G_q                       (M_rx x 2 M_tx)
struct EffectiveLinks {
  CMatrix h_eff;
  CMatrix y;
  std::vector<CMatrix> reduced;
  std::vector<CMatrix> s_mats;
  std::vector<CMatrix> z;

  std::vector<CMatrix> user_streams;
  std::vector<CMatrix> v_mats;
  std::vector<CMatrix> tx_reduced;

  std::vector<double> sinr;
  std::vector<double> sinr_den;  // D_k
  std::vector<double> scnr;
  std::vector<double> scnr_den;  // D_t^r, zero when f_t = 0

  static EffectiveLinks Compute(const ProductPoint& x, const ChannelSet& channels,
                                const ScenarioConfig& cfg, bool with_gradient_terms = false);
};

/// Linear-scale metrics of one point.
struct MetricReport {
  std::vector<double> sinr;
  std::vector<double> scnr;
  double min_sinr = 0.0;
  double min_scnr = 0.0;
};

MetricReport EvaluateMetrics(const ProductPoint& x, const ChannelSet& channels,
                             const ScenarioConfig& cfg);

/// SINR of user k (0-based).
double Sinr(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg, int k);

/// SCNR of target t (0-based). A zero receive filter yields 0.
double Scnr(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg, int t);

/// mu * log(1 + exp(z / mu)) evaluated without overflow. Throws DomainError for mu <= 0.
double LseSmooth(double z, double mu);

/// Logistic function 1 / (1 + exp(-z)) evaluated without overflow.
double Logistic(double z);

/// Smoothed exact-penalty objective:
/// (rho-1) a - rho b + lambda [sum_k S(a - SINR_k) + sum_t S(b - SCNR_t) + S(-a) + S(-b)].
double PenalizedObjective(const ProductPoint& x, const ChannelSet& channels,
                          const ScenarioConfig& cfg, double lambda, double mu);

/// Same as above from precomputed links.
double PenalizedObjective(const ProductPoint& x, const EffectiveLinks& links,
                          const ScenarioConfig& cfg, double lambda, double mu);

/// Nonsmooth counterpart with hinge terms in place of S(.).
double ExactPenaltyObjective(const ProductPoint& x, const ChannelSet& channels,
                             const ScenarioConfig& cfg, double lambda);

/// max{0, -a, -b, max_k(a - SINR_k), max_t(b - SCNR_t)}.
double MaxViolation(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg);
double MaxViolation(const ProductPoint& x, const EffectiveLinks& links);

}  // namespace polarisac
