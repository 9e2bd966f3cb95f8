#include "run_log.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>

namespace ropt {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::kGradientTolerance:
      return "gradient_tolerance";
    case StopReason::kMaxIter:
      return "max_iter";
    case StopReason::kMaxTime:
      return "max_time";
    case StopReason::kUserStop:
      return "user_stop";
    case StopReason::kStepCollapse:
      return "step_collapse";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  if (max_iter < min_iter) {
    throw ArgumentError("SolverOptions: max_iter must be >= min_iter");
  }
  if (!(tol_grad_norm > 0.0) || !(max_time_seconds > 0.0)) {
    throw ArgumentError("SolverOptions: tolerances must be positive");
  }
  if (!(armijo_contraction > 0.0 && armijo_contraction < 1.0) ||
      !(armijo_sufficient_decrease > 0.0 && armijo_sufficient_decrease < 1.0) ||
      armijo_max_halvings < 0) {
    throw ArgumentError("SolverOptions: invalid line-search constants");
  }
  if ((Delta_bar && !(*Delta_bar > 0.0)) || (Delta0 && !(*Delta0 > 0.0)) ||
      !(kappa > 0.0 && kappa < 1.0) || (theta && *theta < 0.0) ||
      !(rho_prime >= 0.0 && rho_prime < 0.25)) {
    throw ArgumentError("SolverOptions: invalid trust-region constants");
  }
}

std::optional<StopReason> shared_stopping(const IterationRecord& record,
                                          const SolverOptions& opts) {
  if (record.grad_norm <= opts.tol_grad_norm && record.iter >= opts.min_iter) {
    return StopReason::kGradientTolerance;
  }
  if (record.iter >= opts.max_iter) return StopReason::kMaxIter;
  if (record.elapsed_seconds >= opts.max_time_seconds) {
    return StopReason::kMaxTime;
  }
  if (opts.stop_callback && opts.stop_callback(record)) {
    return StopReason::kUserStop;
  }
  return std::nullopt;
}

namespace detail {

RunLog::RunLog(const SolverOptions& opts, const char* solver)
    : opts_(opts), solver_(solver), start_(std::chrono::steady_clock::now()) {
  opts_.validate();
}

double RunLog::elapsed() const {
  if (opts_.clock) return opts_.clock();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start_)
      .count();
}

std::optional<StopReason> RunLog::push(IterationRecord rec) {
  rec.elapsed_seconds = elapsed();
  history_.push_back(rec);
  if (opts_.stats_callback) opts_.stats_callback(rec);
  if (opts_.verbosity >= 2) {
    std::ostream& os = opts_.log ? *opts_.log : std::cout;
    os << solver_ << " iter " << std::setw(5) << rec.iter << "  cost "
       << std::setprecision(12) << std::scientific << rec.cost << "  |grad| "
       << std::setprecision(4) << rec.grad_norm;
    if (rec.step_size > 0.0) os << "  step " << rec.step_size;
    if (rec.inner_iterations >= 0) os << "  inner " << rec.inner_iterations;
    if (!std::isnan(rec.Delta)) os << "  Delta " << rec.Delta;
    if (!std::isnan(rec.rho)) os << "  rho " << rec.rho;
    if (!std::isnan(rec.beta)) os << "  beta " << rec.beta;
    if (!rec.accepted) os << "  (rejected)";
    os << std::defaultfloat << "\n";
  }
  return shared_stopping(rec, opts_);
}

void RunLog::finish(RunResult& result, StopReason reason,
                    const CacheStore& store) {
  result.stop_reason = reason;
  result.history = std::move(history_);
  result.counters = store.counters();
  result.notes = store.notes();
  if (opts_.verbosity >= 1) {
    std::ostream& os = opts_.log ? *opts_.log : std::cout;
    os << solver_ << ": stopped (" << to_string(reason) << ") after "
       << (result.history.empty() ? 0 : result.history.back().iter)
       << " iterations, cost " << std::setprecision(15) << result.cost_final
       << ", |grad| " << std::setprecision(4) << result.grad_norm_final
       << std::defaultfloat << "\n";
    if (opts_.verbosity >= 3) {
      for (const auto& n : result.notes) os << "  note: " << n << "\n";
    }
  }
}

LineSearchResult armijo_backtracking(const ProblemDef& p, CacheStore& store,
                                     const Point& x, double fx,
                                     const Tangent& d, double slope,
                                     double t_init, const SolverOptions& opts) {
  const Manifold& M = *p.manifold;
  double t = t_init;
  for (int halvings = 0; halvings <= opts.armijo_max_halvings; ++halvings) {
    LineSearchResult r;
    r.key = store.new_key();
    try {
      r.x = M.retract(x, d, t);
      r.cost = get_cost(p, r.x, store, r.key);
    } catch (const DegenerateStepError&) {
      r.cost = std::numeric_limits<double>::infinity();
    } catch (const RankCollapseError&) {
      r.cost = std::numeric_limits<double>::infinity();
    }
    if (r.cost <= fx + opts.armijo_sufficient_decrease * t * slope) {
      r.success = true;
      r.t = t;
      return r;
    }
    store.discard(r.key);
    t *= opts.armijo_contraction;
  }
  return {};
}

double initial_step(const ProblemDef& p, CacheStore& store, const Point& x,
                    PointKey key, const Tangent& d, double slope,
                    std::optional<double> prev_decrease,
                    const SolverOptions& opts) {
  const Manifold& M = *p.manifold;
  const double dnorm = M.norm(x, d);
  const double typical = M.typical_dist();
  const double fallback = std::min(typical / dnorm, typical);

  if (opts.line_search == LineSearch::kQuadraticModel) {
    const Tangent Hd = get_hessian(p, x, d, store, key);
    const double curvature = M.inner(x, d, Hd);
    if (curvature > 0.0) return -slope / curvature;
    return fallback;
  }
  if (prev_decrease && *prev_decrease > 0.0) {
    const double t = 2.0 * *prev_decrease / -slope;
    if (std::isfinite(t) && t > 0.0) return t;
  }
  return fallback;
}

}  // namespace detail
}  // namespace ropt
