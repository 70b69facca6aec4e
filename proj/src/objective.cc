#include "polarisac/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polarisac/errors.hpp"

namespace polarisac {

namespace {

void CheckShapes(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg) {
  if (x.w.rows() != cfg.m_tx || x.w.cols() != cfg.n_streams() || x.p_tx.cols() != cfg.m_tx ||
      x.p_rx.cols() != cfg.m_rx || x.p_users.cols() != cfg.n_users || x.f.rows() != cfg.m_rx ||
      x.f.cols() != cfg.n_targets) {
    throw DimensionError("point does not match the scenario dimensions");
  }
  if (static_cast<int>(channels.comm.size()) != cfg.n_users ||
      static_cast<int>(channels.sensing.size()) != cfg.n_objects()) {
    throw DimensionError("channel set does not match the scenario dimensions");
  }
}

/// M P where P = blkdiag(p_0, ..., p_{M-1}); `m` has 2*M columns.
CMatrix RightCombine(const CMatrix& m, const PolarizationSet& p) {
  CMatrix out(m.rows(), p.cols());
  for (Eigen::Index c = 0; c < p.cols(); ++c) {
    out.col(c) = m.middleCols(2 * c, 2) * p.col(c);
  }
  return out;
}

/// P^T M where P = blkdiag(p_0, ..., p_{M-1}); `m` has 2*M rows.
CMatrix LeftCombine(const PolarizationSet& p, const CMatrix& m) {
  CMatrix out(p.cols(), m.cols());
  for (Eigen::Index r = 0; r < p.cols(); ++r) {
    out.row(r) = p(0, r) * m.row(2 * r) + p(1, r) * m.row(2 * r + 1);
  }
  return out;
}

}  // namespace

EffectiveLinks EffectiveLinks::Compute(const ProductPoint& x, const ChannelSet& channels,
                                       const ScenarioConfig& cfg, bool with_gradient_terms) {
  CheckShapes(x, channels, cfg);
  const int n_users = cfg.n_users;
  const int n_targets = cfg.n_targets;
  const int n_objects = cfg.n_objects();
  const Eigen::Index n_streams = x.w.cols();

  EffectiveLinks links;
  links.h_eff.resize(n_users, cfg.m_tx);
  links.sinr.resize(n_users);
  links.sinr_den.resize(n_users);
  if (with_gradient_terms) {
    links.user_streams.resize(n_users);
  }
  for (int k = 0; k < n_users; ++k) {
    const CMatrix hp = RightCombine(channels.comm[k], x.p_tx);  // 2 x M_tx
    links.h_eff.row(k) = x.p_users.col(k).transpose().cast<Complex>() * hp;
    if (with_gradient_terms) {
      links.user_streams[k] = hp * x.w;
    }
  }
  links.y = links.h_eff * x.w;
  for (int k = 0; k < n_users; ++k) {
    const double signal = std::norm(links.y(k, k));
    double interference = 0.0;
    for (Eigen::Index j = 0; j < n_streams; ++j) {
      if (j != k) {
        interference += std::norm(links.y(k, j));
      }
    }
    links.sinr_den[k] = interference + cfg.noise_user(k);
    links.sinr[k] = signal / links.sinr_den[k];
  }

  links.reduced.resize(n_objects);
  links.s_mats.resize(n_objects);
  if (with_gradient_terms) {
    links.v_mats.resize(n_objects);
    links.tx_reduced.resize(n_objects);
  }
  for (int q = 0; q < n_objects; ++q) {
    const CMatrix gp = RightCombine(channels.sensing[q], x.p_tx);  // 2 M_rx x M_tx
    links.reduced[q] = LeftCombine(x.p_rx, gp);
    links.s_mats[q] = links.reduced[q] * x.w;
    if (with_gradient_terms) {
      links.v_mats[q] = gp * x.w;
      links.tx_reduced[q] = LeftCombine(x.p_rx, channels.sensing[q]);
    }
  }

  links.z.resize(n_targets);
  links.scnr.resize(n_targets);
  links.scnr_den.resize(n_targets);
  const double noise = cfg.noise_radar();
  for (int t = 0; t < n_targets; ++t) {
    CMatrix& zt = links.z[t];
    zt.resize(n_objects, n_streams);
    const auto filter_h = x.f.col(t).adjoint();
    for (int q = 0; q < n_objects; ++q) {
      zt.row(q) = filter_h * links.s_mats[q];
    }
    const double filter_energy = x.f.col(t).squaredNorm();
    if (filter_energy == 0.0) {
      links.scnr[t] = 0.0;
      links.scnr_den[t] = 0.0;
      continue;
    }
    const double signal = zt.row(t).squaredNorm();
    double clutter = 0.0;
    for (int q = 0; q < n_objects; ++q) {
      if (q != t) {
        clutter += zt.row(q).squaredNorm();
      }
    }
    links.scnr_den[t] = clutter + noise * filter_energy;
    links.scnr[t] = signal / links.scnr_den[t];
  }
  return links;
}

MetricReport EvaluateMetrics(const ProductPoint& x, const ChannelSet& channels,
                             const ScenarioConfig& cfg) {
  EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg);
  MetricReport report;
  report.sinr = std::move(links.sinr);
  report.scnr = std::move(links.scnr);
  report.min_sinr = *std::min_element(report.sinr.begin(), report.sinr.end());
  report.min_scnr = *std::min_element(report.scnr.begin(), report.scnr.end());
  return report;
}

double Sinr(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg, int k) {
  if (k < 0 || k >= cfg.n_users) {
    throw DimensionError("user index " + std::to_string(k) + " out of range");
  }
  return EffectiveLinks::Compute(x, channels, cfg).sinr[k];
}

double Scnr(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg, int t) {
  if (t < 0 || t >= cfg.n_targets) {
    throw DimensionError("target index " + std::to_string(t) + " out of range");
  }
  return EffectiveLinks::Compute(x, channels, cfg).scnr[t];
}

double LseSmooth(double z, double mu) {
  if (!(mu > 0.0)) {
    throw DomainError("smoothing parameter must be positive");
  }
  return std::max(z, 0.0) + mu * std::log1p(std::exp(-std::abs(z) / mu));
}

double Logistic(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double PenalizedObjective(const ProductPoint& x, const EffectiveLinks& links,
                          const ScenarioConfig& cfg, double lambda, double mu) {
  if (!(lambda > 0.0)) {
    throw DomainError("penalty parameter must be positive");
  }
  double penalty = LseSmooth(-x.a, mu) + LseSmooth(-x.b, mu);
  for (double s : links.sinr) {
    penalty += LseSmooth(x.a - s, mu);
  }
  for (double s : links.scnr) {
    penalty += LseSmooth(x.b - s, mu);
  }
  return (cfg.rho - 1.0) * x.a - cfg.rho * x.b + lambda * penalty;
}

double PenalizedObjective(const ProductPoint& x, const ChannelSet& channels,
                          const ScenarioConfig& cfg, double lambda, double mu) {
  return PenalizedObjective(x, EffectiveLinks::Compute(x, channels, cfg), cfg, lambda, mu);
}

double ExactPenaltyObjective(const ProductPoint& x, const ChannelSet& channels,
                             const ScenarioConfig& cfg, double lambda) {
  const EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg);
  double penalty = std::max(0.0, -x.a) + std::max(0.0, -x.b);
  for (double s : links.sinr) {
    penalty += std::max(0.0, x.a - s);
  }
  for (double s : links.scnr) {
    penalty += std::max(0.0, x.b - s);
  }
  return (cfg.rho - 1.0) * x.a - cfg.rho * x.b + lambda * penalty;
}

double MaxViolation(const ProductPoint& x, const EffectiveLinks& links) {
  double v = std::max({0.0, -x.a, -x.b});
  for (double s : links.sinr) {
    v = std::max(v, x.a - s);
  }
  for (double s : links.scnr) {
    v = std::max(v, x.b - s);
  }
  return v;
}

double MaxViolation(const ProductPoint& x, const ChannelSet& channels, const ScenarioConfig& cfg) {
  return MaxViolation(x, EffectiveLinks::Compute(x, channels, cfg));
}

}  // namespace polarisac
