#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ropt/problem.hpp"

namespace ropt {

/// One logged iteration. Fields that a solver does not produce are NaN
/// (reals) or -1 (inner_iterations).
struct IterationRecord {
  std::size_t iter = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  double elapsed_seconds = 0.0;
  double step_size = 0.0;  // norm of the accepted step
  int inner_iterations = -1;
  double Delta = std::numeric_limits<double>::quiet_NaN();
  double rho = std::numeric_limits<double>::quiet_NaN();
  double beta = std::numeric_limits<double>::quiet_NaN();
  bool accepted = true;
};

enum class StopReason {
  kGradientTolerance,
  kMaxIter,
  kMaxTime,
  kUserStop,
  kStepCollapse,
};

std::string to_string(StopReason r);

enum class BetaRule { kPolakRibierePlus, kFletcherReeves, kSteepestDescent };

enum class LineSearch {
  /// Backtracking from the adaptive initial step.
  kArmijo,
  /// Backtracking from the minimizer of the quadratic model along the search
  /// direction (exact on Euclidean quadratics). Needs a Hessian.
  kQuadraticModel,
};

struct SolverOptions {
  std::size_t max_iter = 1000;
  double tol_grad_norm = 1e-6;
  double max_time_seconds = std::numeric_limits<double>::infinity();
  std::size_t min_iter = 3;
  int verbosity = 0;  // 0 silent, 1 summary, 2 per iteration, 3 details

  std::function<void(const IterationRecord&)> stats_callback;
  std::function<bool(const IterationRecord&)> stop_callback;

  /// Seconds since the start of the run; defaults to a steady clock. A clock
  /// returning 0 makes histories reproducible byte for byte.
  std::function<double()> clock;

  /// Used for the initial point when none is given.
  std::uint64_t seed = 0;
  /// Cache setting for the run's CacheStore.
  bool use_cache = true;

  // Line search (steepest descent, CG).
  LineSearch line_search = LineSearch::kArmijo;
  double armijo_contraction = 0.5;
  double armijo_sufficient_decrease = 1e-4;
  int armijo_max_halvings = 25;

  // Conjugate gradients.
  BetaRule beta_rule = BetaRule::kPolakRibierePlus;

  // Trust regions; unset values resolve from the manifold / Hessian source.
  std::optional<double> Delta_bar;
  std::optional<double> Delta0;
  double rho_prime = 0.1;
  double kappa = 0.1;
  std::optional<double> theta;
  std::optional<std::size_t> max_inner;
  std::size_t min_inner = 0;

  std::ostream* log = nullptr;  // verbosity output; std::cout when null

  /// Throws ArgumentError on inconsistent settings.
  void validate() const;
};

struct RunResult {
  Point x_final;
  double cost_final = 0.0;
  double grad_norm_final = 0.0;
  StopReason stop_reason = StopReason::kMaxIter;
  std::vector<IterationRecord> history;
  EvalCounters counters;
  std::vector<std::string> notes;
};

/// Returns the first satisfied criterion in the order gradient tolerance
/// (only once iter >= min_iter), iteration cap, time cap, user callback.
std::optional<StopReason> shared_stopping(const IterationRecord& record,
                                          const SolverOptions& opts);

RunResult steepest_descent(const ProblemDef& p, std::optional<Point> x0,
                           const SolverOptions& opts = {});

/// Preconditioned nonlinear conjugate gradients with projection transport.
RunResult conjugate_gradient(const ProblemDef& p, std::optional<Point> x0,
                             const SolverOptions& opts = {});

/// Riemannian trust regions with a truncated-CG model solver.
RunResult trust_regions(const ProblemDef& p, std::optional<Point> x0,
                        const SolverOptions& opts = {});

enum class TcgStop {
  kNegativeCurvature,
  kExceededTrustRegion,
  kResidualLinear,       // kappa branch of the residual test
  kResidualSuperlinear,  // theta branch of the residual test
  kMaxInner,
};

std::string to_string(TcgStop s);

struct TcgResult {
  Tangent eta;
  Tangent Heta;  // Hessian applied to eta, accumulated along the iterations
  TcgStop stop = TcgStop::kMaxInner;
  std::size_t inner_iterations = 0;

  bool hit_boundary() const {
    return stop == TcgStop::kNegativeCurvature ||
           stop == TcgStop::kExceededTrustRegion;
  }
};

/// Steihaug-Toint truncated CG on the model <g, eta> + 1/2 <eta, H eta>
/// within ||eta|| <= Delta (norm induced by the inverse preconditioner).
TcgResult tcg_subsolver(const ProblemDef& p, const Point& x, const Tangent& g,
                        double Delta, double kappa, double theta,
                        std::size_t max_inner, CacheStore& store, PointKey key,
                        std::size_t min_inner = 0);

/// Writes iter,cost,gradnorm,time,stepsize,inner,Delta,rho with a header.
void write_history_csv(const std::vector<IterationRecord>& history,
                       std::ostream& os);
void write_history_csv(const std::vector<IterationRecord>& history,
                       const std::string& path);

}  // namespace ropt
