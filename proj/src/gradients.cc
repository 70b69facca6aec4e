#include "polarisac/gradients.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polarisac/errors.hpp"

namespace polarisac {

namespace {

/// Quotient-rule coefficients of SINR_k over the streams: 2/D for j = k, -2 SINR/D otherwise,
/// multiplied by conj(y_kj).
Eigen::RowVectorXcd SinrCoefficients(const EffectiveLinks& links, int k) {
  const double den = links.sinr_den[k];
  Eigen::RowVectorXcd c = links.y.row(k).conjugate() * (-2.0 * links.sinr[k] / den);
  c(k) = std::conj(links.y(k, k)) * (2.0 / den);
  return c;
}

/// Same for SCNR_t and sensing object q: conj(z_tq) scaled by 2/D or -2 SCNR/D.
Eigen::RowVectorXcd ScnrCoefficients(const EffectiveLinks& links, int t, int q) {
  const double den = links.scnr_den[t];
  const double scale = (q == t) ? 2.0 / den : -2.0 * links.scnr[t] / den;
  return links.z[t].row(q).conjugate() * scale;
}

bool FilterActive(const EffectiveLinks& links, int t) { return links.scnr_den[t] > 0.0; }

void RequireGradientTerms(const EffectiveLinks& links) {
  if (links.user_streams.empty() || links.v_mats.empty()) {
    throw DimensionError("polarization gradients need links computed with gradient terms");
  }
}

PolarizationSet AllTxGradients(const ProductPoint& x, const ChannelSet& channels,
                               const EffectiveLinks& links, const GradientWeights& weights,
                               const ScenarioConfig& cfg) {
  RequireGradientTerms(links);
  PolarizationSet grad = PolarizationSet::Zero(2, cfg.m_tx);
  for (int k = 0; k < cfg.n_users; ++k) {
    if (weights.alpha[k] == 0.0) {
      continue;
    }
    // eta_{k,m} is the m-th pair of p_k^T H_k.
    const Eigen::RowVectorXcd row = x.p_users.col(k).transpose().cast<Complex>() * channels.comm[k];
    const CVector e = x.w * SinrCoefficients(links, k).transpose();
    for (int m = 0; m < cfg.m_tx; ++m) {
      const Eigen::Vector2cd eta = row.segment<2>(2 * m).transpose();
      grad.col(m) -= weights.alpha[k] * (eta * e(m)).real();
    }
  }
  for (int t = 0; t < cfg.n_targets; ++t) {
    if (weights.beta[t] == 0.0 || !FilterActive(links, t)) {
      continue;
    }
    const auto filter_h = x.f.col(t).adjoint();
    for (int q = 0; q < cfg.n_objects(); ++q) {
      // d_{t,q,m} is the m-th pair of f_t^H P_rx^T G_q.
      const Eigen::RowVectorXcd row = filter_h * links.tx_reduced[q];
      const CVector e = x.w * ScnrCoefficients(links, t, q).transpose();
      for (int m = 0; m < cfg.m_tx; ++m) {
        const Eigen::Vector2cd d = row.segment<2>(2 * m).transpose();
        grad.col(m) -= weights.beta[t] * (d * e(m)).real();
      }
    }
  }
  return grad;
}

PolarizationSet AllRxGradients(const ProductPoint& x, const EffectiveLinks& links,
                               const GradientWeights& weights, const ScenarioConfig& cfg) {
  RequireGradientTerms(links);
  PolarizationSet grad = PolarizationSet::Zero(2, cfg.m_rx);
  for (int t = 0; t < cfg.n_targets; ++t) {
    if (weights.beta[t] == 0.0 || !FilterActive(links, t)) {
      continue;
    }
    for (int q = 0; q < cfg.n_objects(); ++q) {
      const CVector r = links.v_mats[q] * ScnrCoefficients(links, t, q).transpose();
      for (int m = 0; m < cfg.m_rx; ++m) {
        const Eigen::Vector2cd v = r.segment<2>(2 * m);
        grad.col(m) -= weights.beta[t] * (std::conj(x.f(m, t)) * v).real();
      }
    }
  }
  return grad;
}

void CheckIndex(int index, int count, const char* what) {
  if (index < 0 || index >= count) {
    throw DimensionError(std::string(what) + " index " + std::to_string(index) + " out of range");
  }
}

}  // namespace

GradientWeights ComputeGradientWeights(const ProductPoint& x, const EffectiveLinks& links,
                                       double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) {
    throw DomainError("gradient weights need positive lambda and mu");
  }
  GradientWeights weights;
  weights.alpha.reserve(links.sinr.size());
  for (double s : links.sinr) {
    weights.alpha.push_back(lambda * Logistic((x.a - s) / mu));
  }
  weights.beta.reserve(links.scnr.size());
  for (double s : links.scnr) {
    weights.beta.push_back(lambda * Logistic((x.b - s) / mu));
  }
  return weights;
}

GradientWeights ComputeGradientWeights(const ProductPoint& x, const ChannelSet& channels,
                                       const ScenarioConfig& cfg, double lambda, double mu) {
  return ComputeGradientWeights(x, EffectiveLinks::Compute(x, channels, cfg), lambda, mu);
}

CMatrix GradW(const ProductPoint& x, const EffectiveLinks& links, const GradientWeights& weights,
              const ScenarioConfig& cfg) {
  CMatrix grad = CMatrix::Zero(x.w.rows(), x.w.cols());
  for (int k = 0; k < cfg.n_users; ++k) {
    if (weights.alpha[k] == 0.0) {
      continue;
    }
    // column j: coef_j * h (h^H w_j) with h = h_eff.row(k)^H
    const Eigen::RowVectorXcd scaled = SinrCoefficients(links, k).conjugate();
    grad.noalias() -= weights.alpha[k] * (links.h_eff.row(k).adjoint() * scaled);
  }
  for (int t = 0; t < cfg.n_targets; ++t) {
    if (weights.beta[t] == 0.0 || !FilterActive(links, t)) {
      continue;
    }
    const auto filter_h = x.f.col(t).adjoint();
    for (int q = 0; q < cfg.n_objects(); ++q) {
      const CVector u = (filter_h * links.reduced[q]).adjoint();
      const Eigen::RowVectorXcd scaled = ScnrCoefficients(links, t, q).conjugate();
      grad.noalias() -= weights.beta[t] * (u * scaled);
    }
  }
  return grad;
}

CMatrix GradF(const ProductPoint& x, const EffectiveLinks& links, const GradientWeights& weights,
              const ScenarioConfig& cfg) {
  CMatrix grad = CMatrix::Zero(x.f.rows(), x.f.cols());
  const double noise = cfg.noise_radar();
  for (int t = 0; t < cfg.n_targets; ++t) {
    if (weights.beta[t] == 0.0 || !FilterActive(links, t)) {
      continue;
    }
    // A_t f = S_t S_t^H f = S_t z_tt^H and B_t f = sum_{q != t} S_q z_tq^H + noise f
    CVector a_f = links.s_mats[t] * links.z[t].row(t).adjoint();
    CVector b_f = noise * x.f.col(t);
    for (int q = 0; q < cfg.n_objects(); ++q) {
      if (q != t) {
        b_f.noalias() += links.s_mats[q] * links.z[t].row(q).adjoint();
      }
    }
    grad.col(t) =
        -weights.beta[t] * (2.0 / links.scnr_den[t]) * (a_f - links.scnr[t] * b_f);
  }
  return grad;
}

Eigen::Vector2d GradPUser(const ProductPoint& /*x*/, const ChannelSet& /*channels*/,
                          const EffectiveLinks& links, const GradientWeights& weights,
                          const ScenarioConfig& cfg, int k) {
  CheckIndex(k, cfg.n_users, "user");
  RequireGradientTerms(links);
  if (weights.alpha[k] == 0.0) {
    return Eigen::Vector2d::Zero();
  }
  const Eigen::Vector2cd combined = links.user_streams[k] * SinrCoefficients(links, k).transpose();
  return -weights.alpha[k] * combined.real();
}

Eigen::Vector2d GradPTx(const ProductPoint& x, const ChannelSet& channels,
                        const EffectiveLinks& links, const GradientWeights& weights,
                        const ScenarioConfig& cfg, int m) {
  CheckIndex(m, cfg.m_tx, "transmit antenna");
  return AllTxGradients(x, channels, links, weights, cfg).col(m);
}

Eigen::Vector2d GradPRx(const ProductPoint& x, const ChannelSet& /*channels*/,
                        const EffectiveLinks& links, const GradientWeights& weights,
                        const ScenarioConfig& cfg, int m) {
  CheckIndex(m, cfg.m_rx, "receive antenna");
  return AllRxGradients(x, links, weights, cfg).col(m);
}

std::pair<double, double> GradAb(const ProductPoint& x, const ChannelSet& channels,
                                 const ScenarioConfig& cfg, double lambda, double mu) {
  const GradientWeights weights = ComputeGradientWeights(x, channels, cfg, lambda, mu);
  double grad_a = (cfg.rho - 1.0) - lambda * Logistic(-x.a / mu);
  for (double alpha : weights.alpha) {
    grad_a += alpha;
  }
  double grad_b = -cfg.rho - lambda * Logistic(-x.b / mu);
  for (double beta : weights.beta) {
    grad_b += beta;
  }
  return {grad_a, grad_b};
}

Blocks MetricGradient(const ProductPoint& x, const ChannelSet& channels, const EffectiveLinks& links,
                      const GradientWeights& weights, const ScenarioConfig& cfg) {
  Blocks grad;
  grad.w = GradW(x, links, weights, cfg);
  grad.p_tx = AllTxGradients(x, channels, links, weights, cfg);
  grad.p_rx = AllRxGradients(x, links, weights, cfg);
  grad.p_users.resize(2, cfg.n_users);
  for (int k = 0; k < cfg.n_users; ++k) {
    grad.p_users.col(k) = GradPUser(x, channels, links, weights, cfg, k);
  }
  grad.f = GradF(x, links, weights, cfg);
  return grad;
}

Blocks EuclideanGradient(const ProductPoint& x, const ChannelSet& channels,
                         const ScenarioConfig& cfg, double lambda, double mu) {
  const EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg, true);
  const GradientWeights weights = ComputeGradientWeights(x, links, lambda, mu);
  Blocks grad = MetricGradient(x, channels, links, weights, cfg);
  grad.a = (cfg.rho - 1.0) - lambda * Logistic(-x.a / mu);
  for (double alpha : weights.alpha) {
    grad.a += alpha;
  }
  grad.b = -cfg.rho - lambda * Logistic(-x.b / mu);
  for (double beta : weights.beta) {
    grad.b += beta;
  }
  return grad;
}

TangentVector RiemannianGradient(const ProductPoint& x, const ChannelSet& channels,
                                 const ScenarioConfig& cfg, double lambda, double mu) {
  return ProjectToTangent(x, EuclideanGradient(x, channels, cfg, lambda, mu), cfg.power());
}

Blocks FiniteDifferenceGradient(const ScalarField& fn, const ProductPoint& x, double h) {
  if (!(h > 0.0)) {
    throw DomainError("finite-difference step must be positive");
  }
  Blocks grad = Blocks::ZeroLike(x);
  ProductPoint probe = x;
  const auto central = [&](double& coordinate) {
    const double saved = coordinate;
    coordinate = saved + h;
    const double up = fn(probe);
    coordinate = saved - h;
    const double down = fn(probe);
    coordinate = saved;
    return (up - down) / (2.0 * h);
  };
  const auto complex_block = [&](CMatrix& target, CMatrix& out) {
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
      for (Eigen::Index r = 0; r < target.rows(); ++r) {
        auto& entry = reinterpret_cast<double(&)[2]>(target(r, c));
        const double d_re = central(entry[0]);
        const double d_im = central(entry[1]);
        out(r, c) = Complex(d_re, d_im);
      }
    }
  };
  const auto real_block = [&](PolarizationSet& target, PolarizationSet& out) {
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
      for (Eigen::Index r = 0; r < 2; ++r) {
        out(r, c) = central(target(r, c));
      }
    }
  };
  complex_block(probe.w, grad.w);
  real_block(probe.p_tx, grad.p_tx);
  real_block(probe.p_rx, grad.p_rx);
  real_block(probe.p_users, grad.p_users);
  complex_block(probe.f, grad.f);
  grad.a = central(probe.a);
  grad.b = central(probe.b);
  return grad;
}

Blocks FiniteDifferenceGradient(const ProductPoint& x, const ChannelSet& channels,
                                const ScenarioConfig& cfg, double lambda, double mu, double h) {
  return FiniteDifferenceGradient(
      [&](const ProductPoint& p) { return PenalizedObjective(p, channels, cfg, lambda, mu); }, x, h);
}

std::vector<BlockError> CompareBlocks(const Blocks& analytic, const Blocks& reference) {
  if (!analytic.SameShape(reference)) {
    throw DimensionError("gradient comparison needs equally shaped blocks");
  }
  std::vector<BlockError> out;
  const auto add = [&out](std::string name, double norm_a, double norm_r, double norm_d) {
    const double scale = std::max(norm_a, norm_r);
    out.push_back(BlockError{std::move(name), norm_a, norm_r, scale > 0.0 ? norm_d / scale : 0.0});
  };
  add("w", analytic.w.norm(), reference.w.norm(), (analytic.w - reference.w).norm());
  add("p_tx", analytic.p_tx.norm(), reference.p_tx.norm(), (analytic.p_tx - reference.p_tx).norm());
  add("p_rx", analytic.p_rx.norm(), reference.p_rx.norm(), (analytic.p_rx - reference.p_rx).norm());
  add("p_users", analytic.p_users.norm(), reference.p_users.norm(),
      (analytic.p_users - reference.p_users).norm());
  add("f", analytic.f.norm(), reference.f.norm(), (analytic.f - reference.f).norm());
  add("a", std::abs(analytic.a), std::abs(reference.a), std::abs(analytic.a - reference.a));
  add("b", std::abs(analytic.b), std::abs(reference.b), std::abs(analytic.b - reference.b));
  return out;
}

ProductPoint GradientCheckPoint(const ScenarioConfig& cfg, const ChannelSet& channels,
                                std::uint64_t seed) {
  ProductPoint x = RandomPoint(cfg, seed);
  const MetricReport metrics = EvaluateMetrics(x, channels, cfg);
  x.a = metrics.min_sinr;
  x.b = metrics.min_scnr;
  return x;
}

}  // namespace polarisac
