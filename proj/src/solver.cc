#include "polarisac/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polarisac/errors.hpp"
#include "polarisac/gradients.hpp"

namespace polarisac {

namespace {

void RequirePositive(const char* field, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(field) + " must be positive and finite");
  }
}

void RequireOpenUnit(const char* field, double value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw ConfigError(std::string(field) + " must lie strictly inside (0, 1)");
  }
}

void RequireFloor(const char* floor_field, double floor, const char* initial_field, double initial) {
  if (floor > initial) {
    throw ConfigError(std::string(floor_field) + " must not exceed " + initial_field);
  }
}

void ZeroPolarization(Blocks& g) {
  g.p_tx.setZero();
  g.p_rx.setZero();
  g.p_users.setZero();
}

ProductPoint WithDiagonalPolarization(const ProductPoint& start) {
  ProductPoint x = start;
  x.p_tx.colwise() = DiagonalPolarization();
  x.p_rx.colwise() = DiagonalPolarization();
  x.p_users.colwise() = DiagonalPolarization();
  return x;
}

SolveResult RunOuterLoop(const ScenarioConfig& cfg, const ChannelSet& channels,
                         const Hyperparams& hyper, const ProductPoint& start, bool freeze,
                         const TraceObserver* observer) {
  hyper.Validate();
  SolveResult result;
  ProductPoint x = start;
  double lambda = hyper.lambda0;
  double mu = hyper.mu0;
  double eps = hyper.eps0;
  double sigma = hyper.sigma0;
  double tau_init = hyper.tau_init0;

  for (int j = 0; j < hyper.i_outer; ++j) {
    const SmoothProblem problem = MakePenaltyProblem(channels, cfg, lambda, mu, freeze);
    InnerResult inner = PrmgdInner(problem, x, eps, hyper.i_inner, tau_init, hyper, j, observer);
    const double displacement = inner.stalled ? 0.0 : PointDistance(inner.point, x);
    x = std::move(inner.point);
    tau_init = inner.tau_init;
    result.trace.inner.insert(result.trace.inner.end(), inner.records.begin(),
                              inner.records.end());

    const double next_mu = std::max(hyper.mu_min, mu * hyper.decay_mu);
    const double next_eps = std::max(hyper.eps_min, eps * hyper.decay_eps);
    const double next_sigma = std::max(hyper.sigma_min, sigma * hyper.decay_sigma);
    const EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg);
    const double v_max = MaxViolation(x, links);

    OuterRecord record;
    record.outer = j;
    record.lambda = lambda;
    record.mu = mu;
    record.eps = eps;
    record.sigma = sigma;
    record.v_max = v_max;
    record.min_sinr = *std::min_element(links.sinr.begin(), links.sinr.end());
    record.min_scnr = *std::min_element(links.scnr.begin(), links.scnr.end());
    record.a = x.a;
    record.b = x.b;
    record.displacement = displacement;
    record.exit_grad_norm = inner.exit_grad_norm;
    record.inner_iterations = inner.iterations;
    record.stalled = inner.stalled;
    result.trace.outer.push_back(record);
    if (observer != nullptr && observer->on_outer) {
      observer->on_outer(record);
    }

    // The violation is compared against the already-decayed tolerance.
    if (v_max > next_sigma) {
      lambda /= hyper.decay_lambda;
    }
    mu = next_mu;
    eps = next_eps;
    sigma = next_sigma;
    if (displacement <= hyper.o_tol && mu == hyper.mu_min && sigma == hyper.sigma_min) {
      result.trace.converged = true;
      break;
    }
  }
  result.point = std::move(x);
  return result;
}

}  // namespace

Hyperparams Hyperparams::Paper() { return Hyperparams{}; }

Hyperparams Hyperparams::Desk() {
  Hyperparams h;
  h.lambda0 = 0.08 / std::pow(0.75, 7);
  return h;
}

void Hyperparams::Validate() const {
  RequirePositive("lambda0", lambda0);
  RequirePositive("mu0", mu0);
  RequirePositive("eps0", eps0);
  RequirePositive("sigma0", sigma0);
  RequireOpenUnit("decay_lambda", decay_lambda);
  RequireOpenUnit("decay_mu", decay_mu);
  RequireOpenUnit("decay_eps", decay_eps);
  RequireOpenUnit("decay_sigma", decay_sigma);
  RequirePositive("mu_min", mu_min);
  RequirePositive("eps_min", eps_min);
  RequirePositive("sigma_min", sigma_min);
  RequirePositive("o_tol", o_tol);
  RequireFloor("mu_min", mu_min, "mu0", mu0);
  RequireFloor("eps_min", eps_min, "eps0", eps0);
  RequireFloor("sigma_min", sigma_min, "sigma0", sigma0);
  if (i_inner < 1) {
    throw ConfigError("i_inner must be >= 1");
  }
  if (i_outer < 1) {
    throw ConfigError("i_outer must be >= 1");
  }
  RequireOpenUnit("armijo_c", armijo_c);
  RequireOpenUnit("armijo_beta", armijo_beta);
  RequirePositive("tau_init0", tau_init0);
  if (max_backtracks < 0) {
    throw ConfigError("max_backtracks must be >= 0");
  }
}

SmoothProblem MakePenaltyProblem(const ChannelSet& channels, const ScenarioConfig& cfg,
                                 double lambda, double mu, bool freeze_polarization) {
  SmoothProblem problem;
  problem.value = [&channels, &cfg, lambda, mu](const ProductPoint& x) {
    return PenalizedObjective(x, channels, cfg, lambda, mu);
  };
  problem.gradient = [&channels, &cfg, lambda, mu](const ProductPoint& x) {
    return EuclideanGradient(x, channels, cfg, lambda, mu);
  };
  problem.power = cfg.power();
  problem.freeze_polarization = freeze_polarization;
  return problem;
}

SmoothProblem MakeSumProblem(const ChannelSet& channels, const ScenarioConfig& cfg) {
  const double user_weight = (1.0 - cfg.rho) / cfg.n_users;
  const double target_weight = cfg.rho / cfg.n_targets;
  SmoothProblem problem;
  problem.value = [&channels, &cfg, user_weight, target_weight](const ProductPoint& x) {
    const EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg);
    double utility = 0.0;
    for (double s : links.sinr) {
      utility += user_weight * s;
    }
    for (double s : links.scnr) {
      utility += target_weight * s;
    }
    return -utility;
  };
  problem.gradient = [&channels, &cfg, user_weight, target_weight](const ProductPoint& x) {
    const EffectiveLinks links = EffectiveLinks::Compute(x, channels, cfg, true);
    GradientWeights weights;
    weights.alpha.assign(cfg.n_users, user_weight);
    weights.beta.assign(cfg.n_targets, target_weight);
    Blocks grad = MetricGradient(x, channels, links, weights, cfg);
    grad.a = 0.0;
    grad.b = 0.0;
    return grad;
  };
  problem.power = cfg.power();
  return problem;
}

ArmijoResult ArmijoSearch(const SmoothProblem& problem, const ProductPoint& x, double phi_x,
                          const TangentVector& grad, double tau_init, const Hyperparams& hyper) {
  if (!(tau_init > 0.0)) {
    throw DomainError("initial step size must be positive");
  }
  const double grad_norm_sq = InnerProduct(grad, grad);
  double tau = tau_init;
  for (int m = 0; m <= hyper.max_backtracks; ++m, tau *= hyper.armijo_beta) {
    ProductPoint candidate;
    try {
      candidate = Retract(x, grad, tau, problem.power);
    } catch (const DegenerateRetraction&) {
      continue;
    }
    if (problem.freeze_polarization) {
      candidate.p_tx = x.p_tx;
      candidate.p_rx = x.p_rx;
      candidate.p_users = x.p_users;
    }
    const double phi = problem.value(candidate);
    if (phi <= phi_x - hyper.armijo_c * tau * grad_norm_sq) {
      return ArmijoResult{std::move(candidate), tau, m, phi};
    }
  }
  throw LineSearchFailure("no sufficient decrease after " + std::to_string(hyper.max_backtracks) +
                          " backtracks");
}

ArmijoResult ArmijoSearch(const ProductPoint& x, const ChannelSet& channels,
                          const ScenarioConfig& cfg, double lambda, double mu,
                          const TangentVector& grad, double tau_init, const Hyperparams& hyper) {
  const SmoothProblem problem = MakePenaltyProblem(channels, cfg, lambda, mu);
  return ArmijoSearch(problem, x, problem.value(x), grad, tau_init, hyper);
}

double NextTauInit(double tau_accepted, int backtracks) {
  if (backtracks == 0) {
    return 2.0 * tau_accepted;
  }
  if (backtracks == 1) {
    return tau_accepted;
  }
  return 0.5 * tau_accepted;
}

InnerResult PrmgdInner(const SmoothProblem& problem, const ProductPoint& start, double eps,
                       int max_iterations, double tau_init, const Hyperparams& hyper,
                       int outer_index, const TraceObserver* observer) {
  InnerResult result;
  result.point = start;
  result.tau_init = tau_init;
  double phi = problem.value(result.point);
  for (int i = 0;; ++i) {
    Blocks euclidean = problem.gradient(result.point);
    if (problem.freeze_polarization) {
      ZeroPolarization(euclidean);
    }
    const TangentVector grad = ProjectToTangent(result.point, euclidean, problem.power);
    const double grad_norm_sq = InnerProduct(grad, grad);
    result.exit_grad_norm = std::sqrt(grad_norm_sq);
    result.iterations = i;
    if (result.exit_grad_norm <= eps || i >= max_iterations) {
      break;
    }
    InnerRecord record;
    record.outer = outer_index;
    record.inner = i;
    record.phi_before = phi;
    record.grad_norm = result.exit_grad_norm;
    record.grad_norm_sq = grad_norm_sq;
    try {
      ArmijoResult step = ArmijoSearch(problem, result.point, phi, grad, result.tau_init, hyper);
      record.phi_after = step.phi;
      record.tau = step.tau;
      record.backtracks = step.backtracks;
      result.point = std::move(step.point);
      phi = step.phi;
      result.tau_init = NextTauInit(step.tau, step.backtracks);
    } catch (const LineSearchFailure&) {
      result.stalled = true;
      break;
    }
    record.feasibility = FeasibilityResidual(result.point, problem.power);
    result.records.push_back(record);
    if (observer != nullptr && observer->on_inner) {
      observer->on_inner(record);
    }
  }
  return result;
}

InnerResult PrmgdInner(const ProductPoint& start, const ChannelSet& channels,
                       const ScenarioConfig& cfg, double lambda, double mu, double eps,
                       int max_iterations, double tau_init, const Hyperparams& hyper) {
  return PrmgdInner(MakePenaltyProblem(channels, cfg, lambda, mu), start, eps, max_iterations,
                    tau_init, hyper);
}

SolveResult EpPrmgd(const ScenarioConfig& cfg, const ChannelSet& channels, const Hyperparams& hyper,
                    const ProductPoint& start, const TraceObserver* observer) {
  return RunOuterLoop(cfg, channels, hyper, start, false, observer);
}

SolveResult SolveFixedPolarization(const ScenarioConfig& cfg, const ChannelSet& channels,
                                   const Hyperparams& hyper, const ProductPoint& start,
                                   const TraceObserver* observer) {
  return RunOuterLoop(cfg, channels, hyper, WithDiagonalPolarization(start), true, observer);
}

SolveResult SolveSumObjective(const ScenarioConfig& cfg, const ChannelSet& channels,
                              const Hyperparams& hyper, const ProductPoint& start,
                              const TraceObserver* observer) {
  hyper.Validate();
  const SmoothProblem problem = MakeSumProblem(channels, cfg);
  InnerResult inner = PrmgdInner(problem, start, hyper.eps_min, hyper.i_outer * hyper.i_inner,
                                 hyper.tau_init0, hyper, 0, observer);
  SolveResult result;
  result.trace.inner = std::move(inner.records);
  const EffectiveLinks links = EffectiveLinks::Compute(inner.point, channels, cfg);
  OuterRecord record;
  record.v_max = MaxViolation(inner.point, links);
  record.min_sinr = *std::min_element(links.sinr.begin(), links.sinr.end());
  record.min_scnr = *std::min_element(links.scnr.begin(), links.scnr.end());
  record.a = inner.point.a;
  record.b = inner.point.b;
  record.displacement = PointDistance(inner.point, start);
  record.exit_grad_norm = inner.exit_grad_norm;
  record.inner_iterations = inner.iterations;
  record.stalled = inner.stalled;
  result.trace.outer.push_back(record);
  if (observer != nullptr && observer->on_outer) {
    observer->on_outer(record);
  }
  result.point = std::move(inner.point);
  return result;
}

}  // namespace polarisac
