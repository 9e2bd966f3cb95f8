#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "ropt/solvers.hpp"

namespace ropt::detail {

// History, timing, callbacks and verbosity output shared by the solvers.
class RunLog {
 public:
  RunLog(const SolverOptions& opts, const char* solver);

  double elapsed() const;

  /// Stamps the record with the elapsed time, stores it, reports it and
  /// evaluates the stopping criteria.
  std::optional<StopReason> push(IterationRecord rec);

  void finish(RunResult& result, StopReason reason, const CacheStore& store);

  std::vector<IterationRecord>& history() { return history_; }

 private:
  const SolverOptions& opts_;
  const char* solver_;
  std::chrono::steady_clock::time_point start_;
  std::vector<IterationRecord> history_;
};

struct LineSearchResult {
  bool success = false;
  Point x;
  PointKey key = kTransientKey;
  double cost = 0.0;
  double t = 0.0;
};

// Backtracking along d from t_init until
// f(R(x, t d)) <= f(x) + c * t * <g, d>.
LineSearchResult armijo_backtracking(const ProblemDef& p, CacheStore& store,
                                     const Point& x, double fx,
                                     const Tangent& d, double slope,
                                     double t_init, const SolverOptions& opts);

// Initial trial step for the line search along d, where slope = <g, d> < 0
// and prev_decrease is the cost decrease of the previous iteration (or
// nullopt on the first one).
double initial_step(const ProblemDef& p, CacheStore& store, const Point& x,
                    PointKey key, const Tangent& d, double slope,
                    std::optional<double> prev_decrease,
                    const SolverOptions& opts);

}  // namespace ropt::detail
