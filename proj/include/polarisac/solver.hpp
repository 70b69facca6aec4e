#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polarisac/manifold.hpp"
#include "polarisac/objective.hpp"
#include "polarisac/scenario.hpp"

namespace polarisac {

/// Penalty, smoothing and tolerance schedules plus Armijo constants.
struct Hyperparams {
  double lambda0 = 0.08;
  double mu0 = 1.5;
  double eps0 = 1e-2;
  double sigma0 = 0.1;
  double decay_lambda = 0.75;
  double decay_mu = 0.5;
  double decay_eps = 0.6;
  double decay_sigma = 0.7;
  double mu_min = 1e-6;
  double eps_min = 1e-6;
  double sigma_min = 1e-5;
  double o_tol = 1e-6;
  int i_inner = 150;
  int i_outer = 25;
  double armijo_c = 1e-4;
  double armijo_beta = 0.5;
  double tau_init0 = 1.0;
  int max_backtracks = 50;

  /// The defaults above; tuned for K = T = 8.
  static Hyperparams Paper();
  /// Paper() with lambda0 = 0.08 / 0.75^7 ~ 0.6, the first rung of the penalty ladder above
  /// max(rho, 1 - rho). With K = T = 4 the smaller start leaves the penalized objective
  /// unbounded below in a and b (K lambda < 1 - rho), and the doubling step rule then
  /// throws the iterate far off before the penalty catches up.
  static Hyperparams Desk();

  /// Throws ConfigError naming the first invalid field.
  void Validate() const;
};

/// One accepted (or attempted, if stalled) inner iteration.
struct InnerRecord {
  int outer = 0;
  int inner = 0;
  double phi_before = 0.0;
  double phi_after = 0.0;
  double grad_norm = 0.0;
  double grad_norm_sq = 0.0;
  double tau = 0.0;
  int backtracks = 0;
  double feasibility = 0.0;
};

/// State at the end of one outer iteration. lambda/mu/eps/sigma are the values the
/// inner loop of this iteration ran with.
struct OuterRecord {
  int outer = 0;
  double lambda = 0.0;
  double mu = 0.0;
  double eps = 0.0;
  double sigma = 0.0;
  double v_max = 0.0;
  double min_sinr = 0.0;
  double min_scnr = 0.0;
  double a = 0.0;
  double b = 0.0;
  double displacement = 0.0;
  double exit_grad_norm = 0.0;
  int inner_iterations = 0;
  bool stalled = false;
};

struct SolveTrace {
  std::vector<InnerRecord> inner;
  std::vector<OuterRecord> outer;
  bool converged = false;  // terminated by the displacement/floor test rather than the cap
};

/// Live observers, called as records are produced.
struct TraceObserver {
  std::function<void(const InnerRecord&)> on_inner;
  std::function<void(const OuterRecord&)> on_outer;
};

/// A smooth objective on the product manifold together with its Euclidean gradient.
struct SmoothProblem {
  std::function<double(const ProductPoint&)> value;
  std::function<Blocks(const ProductPoint&)> gradient;
  double power = 1.0;
  /// Zero the polarization gradient blocks so those blocks never move.
  bool freeze_polarization = false;
};

/// Smoothed penalized objective at fixed (lambda, mu).
SmoothProblem MakePenaltyProblem(const ChannelSet& channels, const ScenarioConfig& cfg,
                                 double lambda, double mu, bool freeze_polarization = false);

/// -[(1 - rho) mean_k SINR_k + rho mean_t SCNR_t]; the a and b blocks have zero gradient.
SmoothProblem MakeSumProblem(const ChannelSet& channels, const ScenarioConfig& cfg);

struct ArmijoResult {
  ProductPoint point;
  double tau = 0.0;
  int backtracks = 0;
  double phi = 0.0;
};

/// Smallest m >= 0 with phi(Retract(x, grad, tau_init beta^m)) <= phi(x) - c tau ||grad||^2.
/// Degenerate retractions count as failed trials. Throws LineSearchFailure after
/// max_backtracks + 1 trials.
ArmijoResult ArmijoSearch(const SmoothProblem& problem, const ProductPoint& x, double phi_x,
                          const TangentVector& grad, double tau_init, const Hyperparams& hyper);

/// Convenience overload on the penalized objective.
ArmijoResult ArmijoSearch(const ProductPoint& x, const ChannelSet& channels,
                          const ScenarioConfig& cfg, double lambda, double mu,
                          const TangentVector& grad, double tau_init, const Hyperparams& hyper);

/// 2 tau if no backtrack was needed, tau after one, tau / 2 after two or more.
double NextTauInit(double tau_accepted, int backtracks);

struct InnerResult {
  ProductPoint point;
  std::vector<InnerRecord> records;
  double tau_init = 1.0;
  double exit_grad_norm = 0.0;
  int iterations = 0;
  bool stalled = false;
};

/// Riemannian gradient descent with Armijo steps until ||grad|| <= eps or max_iterations.
InnerResult PrmgdInner(const SmoothProblem& problem, const ProductPoint& start, double eps,
                       int max_iterations, double tau_init, const Hyperparams& hyper,
                       int outer_index = 0, const TraceObserver* observer = nullptr);

InnerResult PrmgdInner(const ProductPoint& start, const ChannelSet& channels,
                       const ScenarioConfig& cfg, double lambda, double mu, double eps,
                       int max_iterations, double tau_init, const Hyperparams& hyper);

struct SolveResult {
  ProductPoint point;
  SolveTrace trace;
};

/// Exact-penalty outer loop with decaying smoothing/tolerances and conditional penalty growth.
SolveResult EpPrmgd(const ScenarioConfig& cfg, const ChannelSet& channels, const Hyperparams& hyper,
                    const ProductPoint& start, const TraceObserver* observer = nullptr);

/// EpPrmgd with every polarization vector frozen at (1/sqrt 2, 1/sqrt 2).
SolveResult SolveFixedPolarization(const ScenarioConfig& cfg, const ChannelSet& channels,
                                   const Hyperparams& hyper, const ProductPoint& start,
                                   const TraceObserver* observer = nullptr);

/// Sum-utility design without fairness: one inner loop on MakeSumProblem with an iteration
/// budget of i_outer * i_inner and tolerance eps_min.
SolveResult SolveSumObjective(const ScenarioConfig& cfg, const ChannelSet& channels,
                              const Hyperparams& hyper, const ProductPoint& start,
                              const TraceObserver* observer = nullptr);

}  // namespace polarisac
