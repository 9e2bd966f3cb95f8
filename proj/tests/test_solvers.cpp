#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ropt/linalg.hpp"
#include "ropt/manifolds.hpp"
#include "ropt/problem.hpp"
#include "ropt/solvers.hpp"
#include "solver_matrix.hpp"
#include "test_problems.hpp"

namespace ropt {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double zero_clock() { return 0.0; }

SolverOptions quiet(double tol = 1e-6, std::size_t max_iter = 1000) {
  SolverOptions o;
  o.tol_grad_norm = tol;
  o.max_iter = max_iter;
  o.clock = zero_clock;
  return o;
}

ProblemDef rayleigh(const MatrixXd& A) {
  ProblemDef p;
  p.manifold = sphere_factory(A.rows());
  p.set_cost([A](const Point& x) { return -x.matrix().col(0).dot(A * x.matrix().col(0)); });
  p.set_egrad([A](const Point& x) -> Ambient { return MatrixXd(-2.0 * A * x.matrix()); });
  p.set_ehess([A](const Point&, const Tangent& u) -> Ambient {
    return MatrixXd(-2.0 * A * u.matrix());
  });
  return p;
}

// 1/2 x'Qx - b'x on R^n.
ProblemDef quadratic(const MatrixXd& Q, const VectorXd& b) {
  ProblemDef p;
  p.manifold = euclidean_factory(Q.rows());
  p.set_cost([Q, b](const Point& x) {
    const VectorXd v = x.matrix().col(0);
    return 0.5 * v.dot(Q * v) - b.dot(v);
  });
  p.set_egrad([Q, b](const Point& x) -> Ambient { return MatrixXd(Q * x.matrix() - b); });
  p.set_ehess([Q](const Point&, const Tangent& u) -> Ambient { return MatrixXd(Q * u.matrix()); });
  return p;
}

MatrixXd random_spd(int n, Rng& rng, double shift = 1.0) {
  const MatrixXd B = gaussian_matrix(n, n, rng);
  return B * B.transpose() / n + shift * MatrixXd::Identity(n, n);
}

std::vector<double> accepted_costs(const RunResult& r) {
  std::vector<double> out;
  for (const auto& rec : r.history) {
    if (rec.accepted) out.push_back(rec.cost);
  }
  return out;
}

TEST(SharedStopping, GradientToleranceAfterMinIter) {
  SolverOptions o;
  IterationRecord r;
  r.iter = 5;
  r.grad_norm = 1e-9;
  EXPECT_EQ(shared_stopping(r, o), StopReason::kGradientTolerance);
  r.iter = 2;
  EXPECT_EQ(shared_stopping(r, o), std::nullopt);
}

TEST(SharedStopping, IterationCap) {
  SolverOptions o;
  IterationRecord r;
  r.iter = o.max_iter;
  r.grad_norm = 1.0;
  EXPECT_EQ(shared_stopping(r, o), StopReason::kMaxIter);
}

TEST(SharedStopping, TimeCapAndUserStop) {
  SolverOptions o;
  o.max_time_seconds = 1.0;
  IterationRecord r;
  r.iter = 1;
  r.grad_norm = 1.0;
  r.elapsed_seconds = 2.0;
  EXPECT_EQ(shared_stopping(r, o), StopReason::kMaxTime);
  o.max_time_seconds = std::numeric_limits<double>::infinity();
  o.stop_callback = [](const IterationRecord&) { return true; };
  EXPECT_EQ(shared_stopping(r, o), StopReason::kUserStop);
}

TEST(SharedStopping, FirstCriterionWins) {
  SolverOptions o;
  o.stop_callback = [](const IterationRecord&) { return true; };
  IterationRecord r;
  r.iter = o.max_iter;
  r.grad_norm = 0.0;
  EXPECT_EQ(shared_stopping(r, o), StopReason::kGradientTolerance);
}

TEST(SolverOptions, ValidateRejectsInconsistentSettings) {
  SolverOptions o;
  o.tol_grad_norm = 0.0;
  EXPECT_THROW(o.validate(), ArgumentError);
  o = SolverOptions{};
  o.max_iter = 1;
  o.min_iter = 3;
  EXPECT_THROW(o.validate(), ArgumentError);
  o = SolverOptions{};
  EXPECT_NO_THROW(o.validate());
}

TEST(SteepestDescent, SquaredNormFromOnes) {
  ProblemDef p;
  p.manifold = euclidean_factory(2);
  p.set_cost([](const Point& x) { return x.matrix().squaredNorm(); });
  p.set_egrad([](const Point& x) -> Ambient { return MatrixXd(2.0 * x.matrix()); });
  const RunResult r = steepest_descent(p, Point(MatrixXd::Ones(2, 1)), quiet(1e-10));
  EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
  EXPECT_LE(r.x_final.matrix().norm(), 1e-10);
  const auto costs = accepted_costs(r);
  for (std::size_t k = 1; k < costs.size(); ++k) EXPECT_LE(costs[k], costs[k - 1]);
}

TEST(SteepestDescent, RayleighFindsDominantEigenvector) {
  const MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  SolverOptions o = quiet(1e-6, 5000);
  o.seed = 3;
  const RunResult r = steepest_descent(rayleigh(A), std::nullopt, o);
  EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
  EXPECT_LE(r.grad_norm_final, 1e-6);
  EXPECT_NEAR(std::abs(r.x_final.matrix()(0, 0)), 1.0, 1e-6);
}

TEST(SteepestDescent, CriticalStartStopsAtMinIter) {
  const MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const RunResult r = steepest_descent(rayleigh(A), Point(MatrixXd(Eigen::Vector3d(1, 0, 0))), quiet());
  EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
  EXPECT_EQ(r.history.back().iter, SolverOptions{}.min_iter);
  EXPECT_EQ(r.x_final.matrix(), MatrixXd(Eigen::Vector3d(1, 0, 0)));
}

TEST(SteepestDescent, WrongGradientCollapsesTheStep) {
  ProblemDef p;
  p.manifold = euclidean_factory(2);
  p.set_cost([](const Point& x) { return x.matrix().squaredNorm(); });
  p.set_egrad([](const Point& x) -> Ambient { return MatrixXd(-2.0 * x.matrix()); });
  const RunResult r = steepest_descent(p, Point(MatrixXd::Ones(2, 1)), quiet());
  EXPECT_EQ(r.stop_reason, StopReason::kStepCollapse);
  EXPECT_EQ(r.x_final.matrix(), MatrixXd::Ones(2, 1));
}

TEST(SteepestDescent, UserStopAndCallbacks) {
  const MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  SolverOptions o = quiet();
  std::vector<std::size_t> seen;
  o.stats_callback = [&](const IterationRecord& r) { seen.push_back(r.iter); };
  o.stop_callback = [](const IterationRecord& r) { return r.iter == 2; };
  const RunResult r = steepest_descent(rayleigh(A), std::nullopt, o);
  EXPECT_EQ(r.stop_reason, StopReason::kUserStop);
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ConjugateGradient, FiniteTerminationOnQuadratic) {
  Rng rng(21);
  const int n = 10;
  const MatrixXd Q = random_spd(n, rng);
  const VectorXd b = gaussian_matrix(n, 1, rng);
  SolverOptions o = quiet(1e-8, n + 2);
  o.line_search = LineSearch::kQuadraticModel;
  const RunResult r = conjugate_gradient(quadratic(Q, b), Point(MatrixXd::Zero(n, 1)), o);
  EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
  EXPECT_LE(r.history.back().iter, static_cast<std::size_t>(n + 2));
  const VectorXd xstar = Q.ldlt().solve(b);
  EXPECT_LE((r.x_final.matrix().col(0) - xstar).norm(), 1e-7 * xstar.norm());
}

TEST(ConjugateGradient, InverseHessianPreconditionerIsNoSlower) {
  Rng rng(22);
  const int n = 20;
  const MatrixXd B = gaussian_matrix(n, n, rng);
  MatrixXd Q = B * B.transpose();
  Q.diagonal().array() += 1e-2;
  const VectorXd b = gaussian_matrix(n, 1, rng);
  SolverOptions o = quiet(1e-8, 2000);
  o.line_search = LineSearch::kQuadraticModel;

  ProblemDef plain = quadratic(Q, b);
  ProblemDef pre = plain;
  const MatrixXd Qinv = Q.inverse();
  pre.set_precond([Qinv](const Point&, const Tangent& u) -> Tangent {
    return MatrixXd(Qinv * u.matrix());
  });
  const RunResult r0 = conjugate_gradient(plain, Point(MatrixXd::Zero(n, 1)), o);
  const RunResult r1 = conjugate_gradient(pre, Point(MatrixXd::Zero(n, 1)), o);
  EXPECT_EQ(r1.stop_reason, StopReason::kGradientTolerance);
  EXPECT_LE(r1.history.back().iter, r0.history.back().iter);
  EXPECT_LE(r1.history.back().iter, 3u);
}

TEST(ConjugateGradient, PolakRibierePlusBetaIsNonnegative) {
  Rng rng(23);
  const MatrixXd A = sym(gaussian_matrix(30, 30, rng));
  SolverOptions o = quiet(1e-6, 3000);
  std::size_t checked = 0;
  o.stats_callback = [&](const IterationRecord& r) {
    if (std::isnan(r.beta)) return;
    ++checked;
    EXPECT_GE(r.beta, 0.0);
  };
  const RunResult r = conjugate_gradient(rayleigh(A), std::nullopt, o);
  EXPECT_GT(checked, 10u);
  EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
  const double lmax = Eigen::SelfAdjointEigenSolver<MatrixXd>(A).eigenvalues().maxCoeff();
  EXPECT_NEAR(r.cost_final, -lmax, 1e-8 * std::abs(lmax));
}

TEST(TrustRegions, NewtonLikeOnQuadratic) {
  Rng rng(31);
  const int n = 8;
  const MatrixXd Q = random_spd(n, rng);
  const VectorXd b = gaussian_matrix(n, 1, rng);
  const VectorXd xstar = Q.ldlt().solve(b);
  SolverOptions o = quiet(1e-10, 100);
  o.Delta_bar = 1e3 * (1.0 + xstar.norm());
  o.min_iter = 0;
  // Inner solves to full accuracy; the default kappa makes each step an
  // inexact Newton step.
  o.kappa = 1e-12;
  const RunResult r = trust_regions(quadratic(Q, b), Point(MatrixXd::Zero(n, 1)), o);
  EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
  EXPECT_LE(r.history.back().iter, 3u);
  EXPECT_LE((r.x_final.matrix().col(0) - xstar).norm(), 1e-9 * (1.0 + xstar.norm()));
}

TEST(TrustRegions, RayleighReachesLargestEigenvalue) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Rng rng(seed);
    const MatrixXd A = sym(gaussian_matrix(50, 50, rng));
    SolverOptions o = quiet(1e-9, 200);
    o.seed = seed;
    const RunResult r = trust_regions(rayleigh(A), std::nullopt, o);
    const double lmax = Eigen::SelfAdjointEigenSolver<MatrixXd>(A).eigenvalues().maxCoeff();
    EXPECT_EQ(r.stop_reason, StopReason::kGradientTolerance);
    EXPECT_NEAR(r.cost_final, -lmax, 1e-8);
  }
}

TEST(TrustRegions, LocallyQuadraticWithExactHessian) {
  Rng rng(32);
  const MatrixXd A = sym(gaussian_matrix(50, 50, rng));
  SolverOptions o = quiet(1e-12, 200);
  o.seed = 32;
  const RunResult r = trust_regions(rayleigh(A), std::nullopt, o);
  std::vector<double> g;
  for (const auto& rec : r.history) {
    if (rec.accepted && rec.grad_norm > 1e-12) g.push_back(rec.grad_norm);
  }
  ASSERT_GE(g.size(), 3u);
  const std::size_t k = g.size() - 1;
  const double slope = std::log(g[k] / g[k - 1]) / std::log(g[k - 1] / g[k - 2]);
  EXPECT_GE(slope, 1.8);
}

TEST(TrustRegions, AcceptedStepsDoNotIncreaseCost) {
  for (const auto& mc : testing::solver_cases()) {
    for (const auto& tc : testing::smooth_costs(mc, 5)) {
      SolverOptions o = quiet(1e-8, 300);
      o.seed = 5;
      const RunResult r = trust_regions(tc.problem, std::nullopt, o);
      const auto costs = accepted_costs(r);
      for (std::size_t k = 1; k < costs.size(); ++k) {
        EXPECT_LE(costs[k], costs[k - 1] + 1e-13 * std::max(1.0, std::abs(costs[k - 1])))
            << mc.label << " / " << tc.name << " at " << k;
      }
    }
  }
}

TEST(TrustRegions, GradientNormDropsWithin500Iterations) {
  for (const auto& mc : testing::solver_cases()) {
    for (const auto& tc : testing::smooth_costs(mc, 6)) {
      SolverOptions o = quiet(1e-9, 500);
      o.seed = 6;
      const RunResult r = trust_regions(tc.problem, std::nullopt, o);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& rec : r.history) best = std::min(best, rec.grad_norm);
      EXPECT_LE(best, 1e-4) << mc.label << " / " << tc.name;
    }
  }
}

TEST(Tcg, IdentityModelSolvesInOneStep) {
  ProblemDef p;
  p.manifold = euclidean_factory(3);
  p.set_cost([](const Point& x) { return 0.5 * x.matrix().squaredNorm(); });
  p.set_egrad([](const Point& x) -> Ambient { return x.matrix(); });
  p.set_ehess([](const Point&, const Tangent& u) -> Ambient { return u.matrix(); });
  CacheStore store;
  const PointKey key = store.new_key();
  const Point x(MatrixXd(Eigen::Vector3d(1, -2, 3)));
  const Tangent g = get_gradient(p, x, store, key);
  const TcgResult res = tcg_subsolver(p, x, g, 1e6, 0.1, 1.0, 3, store, key);
  EXPECT_EQ(res.inner_iterations, 1u);
  EXPECT_LE((res.eta.matrix() + g.matrix()).norm(), 1e-15);
  EXPECT_FALSE(res.hit_boundary());
}

TEST(Tcg, NegativeCurvatureGoesToTheBoundary) {
  const MatrixXd H = Eigen::Vector2d(-1.0, 2.0).asDiagonal();
  ProblemDef p = quadratic(H, VectorXd::Zero(2));
  CacheStore store;
  const PointKey key = store.new_key();
  const Point x(MatrixXd(Eigen::Vector2d(-1.0, 0.0)));
  const Tangent g = get_gradient(p, x, store, key);
  ASSERT_EQ(g.matrix(), MatrixXd(Eigen::Vector2d(1.0, 0.0)));
  const double Delta = 0.5;
  const TcgResult res = tcg_subsolver(p, x, g, Delta, 0.1, 1.0, 2, store, key);
  EXPECT_EQ(res.stop, TcgStop::kNegativeCurvature);
  EXPECT_NEAR(res.eta.matrix().norm(), Delta, 1e-12);
  EXPECT_LT(res.eta.matrix()(0, 0), 0.0);
}

TEST(Tcg, AtLeastCauchyDecrease) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 6;
    const MatrixXd H = sym(gaussian_matrix(n, n, rng));
    const VectorXd b = gaussian_matrix(n, 1, rng);
    const ProblemDef p = quadratic(H, b);
    CacheStore store;
    const PointKey key = store.new_key();
    const Point x(MatrixXd::Zero(n, 1));
    const Tangent g = get_gradient(p, x, store, key);
    const VectorXd gv = g.matrix().col(0);
    const double Delta = std::pow(10.0, std::uniform_real_distribution<double>(-2.0, 1.0)(rng));
    const TcgResult res = tcg_subsolver(p, x, g, Delta, 0.1, 1.0, 2 * n, store, key);

    auto model = [&](const VectorXd& e) { return gv.dot(e) + 0.5 * e.dot(H * e); };
    const double gHg = gv.dot(H * gv);
    const double gn = gv.norm();
    const double tau = gHg <= 0.0 ? 1.0 : std::min(gn * gn * gn / (Delta * gHg), 1.0);
    const VectorXd cauchy = -tau * Delta / gn * gv;
    const VectorXd eta = res.eta.matrix().col(0);
    EXPECT_LE(eta.norm(), Delta * (1.0 + 1e-12));
    EXPECT_LT(model(eta), 0.0);
    EXPECT_LE(model(eta), model(cauchy) + 1e-12 * std::abs(model(cauchy)));
  }
}

TEST(Solvers, IteratesStayOnTheManifold) {
  for (const auto& mc : testing::solver_cases()) {
    for (auto& tc : testing::smooth_costs(mc, 7)) {
      auto worst = std::make_shared<double>(0.0);
      ProblemDef p = tc.problem;
      const auto cost = p.cost;
      const ManifoldDescriptor M = mc.M;
      p.cost = [cost, M, worst](const Point& x, CacheEntry& e) {
        *worst = std::max(*worst, M->constraint_violation(x));
        return cost(x, e);
      };
      SolverOptions o = quiet(1e-8, 300);
      o.seed = 7;
      steepest_descent(p, std::nullopt, o);
      conjugate_gradient(p, std::nullopt, o);
      trust_regions(p, std::nullopt, o);
      EXPECT_LE(*worst, 1e-10) << mc.label << " / " << tc.name;
    }
  }
}

TEST(Solvers, StopReasonMatchesFinalGradient) {
  const auto cases = testing::solver_cases();
  for (const auto& tc : testing::smooth_costs(cases[0], 8)) {
    SolverOptions o = quiet(1e-7);
    for (const RunResult& r : {steepest_descent(tc.problem, std::nullopt, o),
                               conjugate_gradient(tc.problem, std::nullopt, o),
                               trust_regions(tc.problem, std::nullopt, o)}) {
      ASSERT_EQ(r.stop_reason, StopReason::kGradientTolerance) << tc.name;
      EXPECT_LE(r.grad_norm_final, o.tol_grad_norm);
      EXPECT_EQ(r.history.back().grad_norm, r.grad_norm_final);
      for (std::size_t k = 1; k < r.history.size(); ++k) {
        EXPECT_GT(r.history[k].iter, r.history[k - 1].iter);
      }
    }
  }
}

TEST(Solvers, Deterministic) {
  Rng rng(9);
  const MatrixXd A = sym(gaussian_matrix(12, 12, rng));
  const ProblemDef p = rayleigh(A);
  SolverOptions o = quiet(1e-9);
  o.seed = 9;
  for (auto solver : {&steepest_descent, &conjugate_gradient, &trust_regions}) {
    const RunResult a = solver(p, std::nullopt, o);
    const RunResult b = solver(p, std::nullopt, o);
    std::ostringstream sa, sb;
    write_history_csv(a.history, sa);
    write_history_csv(b.history, sb);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(a.x_final.matrix(), b.x_final.matrix());
  }
}

TEST(Solvers, HistoryCsvLayout) {
  const MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const RunResult r = trust_regions(rayleigh(A), std::nullopt, quiet());
  std::ostringstream os;
  write_history_csv(r.history, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,cost,gradnorm,time,stepsize,inner,Delta,rho");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
  }
  EXPECT_EQ(rows, r.history.size());
}

TEST(Solvers, CountersAreReported) {
  const MatrixXd A = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const RunResult r = trust_regions(rayleigh(A), std::nullopt, quiet());
  EXPECT_GT(r.counters.cost_evals, 0u);
  EXPECT_GT(r.counters.grad_evals, 0u);
  EXPECT_GT(r.counters.hess_evals, 0u);
}

TEST(Solvers, MissingGradientIsRejected) {
  ProblemDef p;
  p.manifold = sphere_factory(3);
  p.set_cost([](const Point&) { return 0.0; });
  EXPECT_THROW(steepest_descent(p, std::nullopt, quiet()), MissingDerivativeError);
  EXPECT_THROW(conjugate_gradient(p, std::nullopt, quiet()), MissingDerivativeError);
  EXPECT_THROW(trust_regions(p, std::nullopt, quiet()), MissingDerivativeError);
}

TEST(Solvers, EveryPairOfTheMatrixConverges) {
  for (const auto& run : testing::run_solver_matrix(11)) {
    EXPECT_TRUE(run.pass) << run.solver << " on " << run.manifold << " / " << run.cost
                          << ": grad " << run.grad_norm << " after " << run.iterations;
  }
}

}  // namespace
}  // namespace ropt
