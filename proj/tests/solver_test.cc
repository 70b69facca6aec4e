#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "polarisac/errors.hpp"
#include "polarisac/gradients.hpp"
#include "polarisac/solver.hpp"

using namespace polarisac;
using polarisac::oracle::SmallConfig;

namespace {

/// phi = a^2 on the flat a-block; every other block is inert.
SmoothProblem Quadratic(double power) {
  SmoothProblem p;
  p.value = [](const ProductPoint& x) { return x.a * x.a; };
  p.gradient = [](const ProductPoint& x) {
    Blocks g = Blocks::ZeroLike(x);
    g.a = 2.0 * x.a;
    return g;
  };
  p.power = power;
  return p;
}

TangentVector AGradient(const ProductPoint& x, double value) {
  TangentVector g(Blocks::ZeroLike(x));
  g.a = value;
  return g;
}

struct Instance {
  ScenarioConfig cfg;
  ChannelSet channels;
  ProductPoint start;
};

Instance Make(ScenarioConfig cfg, std::uint64_t seed) {
  cfg.seed = seed;
  ChannelSet ch = SampleScenario(cfg);
  return {cfg, std::move(ch), RandomPoint(cfg, seed)};
}

Hyperparams Short() {
  Hyperparams h = Hyperparams::Desk();
  h.i_outer = 8;
  h.i_inner = 40;
  return h;
}

}  // namespace

TEST(NextTau, Rules) {
  EXPECT_DOUBLE_EQ(NextTauInit(0.1, 0), 0.2);
  EXPECT_DOUBLE_EQ(NextTauInit(0.1, 1), 0.1);
  EXPECT_DOUBLE_EQ(NextTauInit(0.1, 2), 0.05);
  EXPECT_DOUBLE_EQ(NextTauInit(0.1, 3), 0.05);
}

TEST(Armijo, QuadraticRegion) {
  // (1 - 2 tau)^2 <= 1 - 4 c tau holds exactly for tau <= 1 - c.
  const Hyperparams h;
  ProductPoint x = RandomPoint(SmallConfig(), 1);
  x.a = 1.0;
  const SmoothProblem q = Quadratic(SmallConfig().power());
  const ArmijoResult r = ArmijoSearch(q, x, 1.0, AGradient(x, 2.0), 1.0, h);
  EXPECT_EQ(r.backtracks, 1);
  EXPECT_DOUBLE_EQ(r.tau, 0.5);
  EXPECT_DOUBLE_EQ(r.point.a, 0.0);
  const ArmijoResult direct = ArmijoSearch(q, x, 1.0, AGradient(x, 2.0), 0.9, h);
  EXPECT_EQ(direct.backtracks, 0);
  EXPECT_LT(direct.phi, 1.0);
  const ArmijoResult inside = ArmijoSearch(q, x, 1.0, AGradient(x, 2.0), 1.0 - 2 * h.armijo_c, h);
  EXPECT_EQ(inside.backtracks, 0);
  const ArmijoResult outside =
      ArmijoSearch(q, x, 1.0, AGradient(x, 2.0), 1.0 - 0.5 * h.armijo_c, h);
  EXPECT_EQ(outside.backtracks, 1);
  const ArmijoResult far = ArmijoSearch(q, x, 1.0, AGradient(x, 2.0), 8.0, h);
  EXPECT_EQ(far.backtracks, 4);
}

TEST(Armijo, ZeroGradientAcceptsImmediately) {
  const Hyperparams h;
  const ProductPoint x = RandomPoint(SmallConfig(), 1);
  const SmoothProblem q = Quadratic(SmallConfig().power());
  const ArmijoResult r = ArmijoSearch(q, x, q.value(x), TangentVector(Blocks::ZeroLike(x)), 1.0, h);
  EXPECT_EQ(r.backtracks, 0);
  EXPECT_LE(PointDistance(r.point, x), 1e-15);
}

TEST(Armijo, FailureAfterBudget) {
  Hyperparams h;
  h.max_backtracks = 5;
  ProductPoint x = RandomPoint(SmallConfig(), 1);
  x.a = 1.0;
  const SmoothProblem q = Quadratic(SmallConfig().power());
  // An ascent direction never satisfies sufficient decrease.
  EXPECT_THROW(ArmijoSearch(q, x, 1.0, AGradient(x, -2.0), 1.0, h), LineSearchFailure);
  EXPECT_THROW(ArmijoSearch(q, x, 1.0, AGradient(x, 2.0), 0.0, h), DomainError);
}

TEST(Armijo, StrictDecreaseOnPenalty) {
  const Instance in = Make(SmallConfig(), 3);
  const Hyperparams h = Hyperparams::Desk();
  const TangentVector g = RiemannianGradient(in.start, in.channels, in.cfg, 0.6, 0.5);
  const double phi = PenalizedObjective(in.start, in.channels, in.cfg, 0.6, 0.5);
  const ArmijoResult r = ArmijoSearch(in.start, in.channels, in.cfg, 0.6, 0.5, g, 1.0, h);
  EXPECT_LT(r.phi, phi);
  EXPECT_LE(FeasibilityResidual(r.point, in.cfg), 1e-12);
}

TEST(Inner, ConvergedStartTakesNoStep) {
  const Instance in = Make(SmallConfig(), 2);
  const InnerResult r =
      PrmgdInner(in.start, in.channels, in.cfg, 0.6, 0.5, 1e300, 50, 1.0, Hyperparams::Desk());
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.records.empty());
  EXPECT_TRUE(r.point == in.start);
}

TEST(Inner, MonotoneAndLoopContract) {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const Instance in = Make(SmallConfig(), 10 + s);
    const double eps = 1e-3;
    const InnerResult r =
        PrmgdInner(in.start, in.channels, in.cfg, 0.6, 0.1, eps, 60, 1.0, Hyperparams::Desk());
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const InnerRecord& rec = r.records[i];
      EXPECT_LE(rec.phi_after, rec.phi_before - 1e-4 * rec.tau * rec.grad_norm_sq);
      EXPECT_LE(rec.feasibility, 1e-10);
      if (i > 0) {
        EXPECT_EQ(rec.phi_before, r.records[i - 1].phi_after);
      }
    }
    EXPECT_TRUE(r.exit_grad_norm <= eps || r.iterations == 60 || r.stalled);
  }
}

TEST(Inner, QuadraticConverges) {
  ProductPoint x = RandomPoint(SmallConfig(), 1);
  x.a = 3.0;
  const InnerResult r = PrmgdInner(Quadratic(SmallConfig().power()), x, 1e-10, 100, 1.0,
                                   Hyperparams());
  EXPECT_LE(std::abs(r.point.a), 1e-10);
  EXPECT_LT(r.iterations, 100);
}

TEST(Outer, ScheduleArithmetic) {
  const Instance in = Make(SmallConfig(), 4);
  Hyperparams h = Hyperparams::Paper();
  h.i_outer = 25;
  h.i_inner = 20;
  const SolveResult r = EpPrmgd(in.cfg, in.channels, h, in.start);
  ASSERT_EQ(r.trace.outer.size(), 25u);
  EXPECT_DOUBLE_EQ(r.trace.outer[0].lambda, 0.08);
  EXPECT_DOUBLE_EQ(r.trace.outer[1].mu, 0.75);
  EXPECT_DOUBLE_EQ(r.trace.outer[2].mu, 0.375);
  for (std::size_t j = 0; j < r.trace.outer.size(); ++j) {
    const OuterRecord& o = r.trace.outer[j];
    EXPECT_DOUBLE_EQ(o.mu, std::max(1e-6, 1.5 * std::pow(0.5, j)));
    EXPECT_NEAR(o.eps, std::max(1e-6, 1e-2 * std::pow(0.6, j)), 1e-15);
    EXPECT_NEAR(o.sigma, std::max(1e-5, 0.1 * std::pow(0.7, j)), 1e-15);
    if (j + 1 < r.trace.outer.size()) {
      const OuterRecord& next = r.trace.outer[j + 1];
      const double expected = o.v_max > next.sigma ? o.lambda / 0.75 : o.lambda;
      EXPECT_EQ(next.lambda, expected);
    }
  }
  EXPECT_DOUBLE_EQ(r.trace.outer.back().mu, 1e-6);
}

TEST(Outer, PenaltyGrowsUnderViolation) {
  const Instance in = Make(SmallConfig(), 4);
  Hyperparams h = Hyperparams::Paper();
  h.i_outer = 2;
  h.i_inner = 1;
  ProductPoint start = in.start;
  start.a = 1e6;  // far above every SINR
  const SolveResult r = EpPrmgd(in.cfg, in.channels, h, start);
  ASSERT_EQ(r.trace.outer.size(), 2u);
  EXPECT_NEAR(r.trace.outer[1].lambda, 0.10666666666666667, 1e-15);
}

TEST(Outer, Deterministic) {
  const Instance in = Make(SmallConfig(), 5);
  const SolveResult a = EpPrmgd(in.cfg, in.channels, Short(), in.start);
  const SolveResult b = EpPrmgd(in.cfg, in.channels, Short(), in.start);
  EXPECT_TRUE(a.point == b.point);
  ASSERT_EQ(a.trace.inner.size(), b.trace.inner.size());
  for (std::size_t i = 0; i < a.trace.inner.size(); ++i) {
    EXPECT_EQ(a.trace.inner[i].phi_after, b.trace.inner[i].phi_after);
    EXPECT_EQ(a.trace.inner[i].tau, b.trace.inner[i].tau);
  }
}

TEST(Outer, ObserverSeesEveryRecord) {
  const Instance in = Make(SmallConfig(), 5);
  std::size_t inner = 0;
  std::size_t outer = 0;
  TraceObserver obs;
  obs.on_inner = [&](const InnerRecord&) { ++inner; };
  obs.on_outer = [&](const OuterRecord&) { ++outer; };
  const SolveResult r = EpPrmgd(in.cfg, in.channels, Short(), in.start, &obs);
  EXPECT_EQ(inner, r.trace.inner.size());
  EXPECT_EQ(outer, r.trace.outer.size());
}

TEST(FixedPolarization, BlocksStayFrozen) {
  const Instance in = Make(SmallConfig(), 6);
  const SolveResult r = SolveFixedPolarization(in.cfg, in.channels, Short(), in.start);
  const Eigen::Vector2d p = DiagonalPolarization();
  for (int m = 0; m < r.point.p_tx.cols(); ++m) EXPECT_TRUE(r.point.p_tx.col(m) == p);
  for (int m = 0; m < r.point.p_rx.cols(); ++m) EXPECT_TRUE(r.point.p_rx.col(m) == p);
  for (int k = 0; k < r.point.p_users.cols(); ++k) EXPECT_TRUE(r.point.p_users.col(k) == p);
  ASSERT_FALSE(r.trace.inner.empty());
  for (const InnerRecord& rec : r.trace.inner) EXPECT_LE(rec.phi_after, rec.phi_before);
  EXPECT_GT(PointDistance(r.point, in.start), 0.0);
}

TEST(SumObjective, ValueAndDescent) {
  Instance in = Make(SmallConfig(), 7);
  in.cfg.rho = 0.0;
  const SmoothProblem p = MakeSumProblem(in.channels, in.cfg);
  const MetricReport m = EvaluateMetrics(in.start, in.channels, in.cfg);
  double mean = 0.0;
  for (double s : m.sinr) mean += s / m.sinr.size();
  EXPECT_NEAR(p.value(in.start), -mean, 1e-12 * mean);

  const auto fn = [&](const ProductPoint& x) { return p.value(x); };
  const Blocks fd = FiniteDifferenceGradient(fn, in.start);
  for (const BlockError& e : CompareBlocks(p.gradient(in.start), fd))
    EXPECT_LE(e.relative_error, 1e-6) << e.block;

  Hyperparams h = Short();
  const SolveResult r = SolveSumObjective(in.cfg, in.channels, h, in.start);
  for (const InnerRecord& rec : r.trace.inner) EXPECT_LE(rec.phi_after, rec.phi_before);
  EXPECT_LT(p.value(r.point), p.value(in.start));
  EXPECT_EQ(r.point.a, in.start.a);
}

TEST(Hyperparams, Presets) {
  EXPECT_DOUBLE_EQ(Hyperparams::Paper().lambda0, 0.08);
  EXPECT_DOUBLE_EQ(Hyperparams::Desk().lambda0, 0.5993232738911751);
  EXPECT_NO_THROW(Hyperparams::Desk().Validate());
  Hyperparams h;
  h.decay_mu = 1.0;
  EXPECT_THROW(h.Validate(), ConfigError);
  h = Hyperparams();
  h.mu_min = 2.0;
  EXPECT_THROW(h.Validate(), ConfigError);
  h = Hyperparams();
  h.i_inner = 0;
  EXPECT_THROW(h.Validate(), ConfigError);
}
