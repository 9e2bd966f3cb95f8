#include <cmath>

#include "run_log.hpp"

namespace ropt {

RunResult steepest_descent(const ProblemDef& p, std::optional<Point> x0,
                           const SolverOptions& opts) {
  if (!p.manifold) throw ArgumentError("steepest_descent: no manifold");
  if (!has_gradient(p)) {
    throw MissingDerivativeError("steepest_descent needs a gradient");
  }
  const Manifold& M = *p.manifold;
  detail::RunLog log(opts, "SD");
  CacheStore store(opts.use_cache);

  Point x;
  if (x0) {
    x = std::move(*x0);
  } else {
    Rng rng(opts.seed);
    x = M.rand_point(rng);
  }
  PointKey key = store.new_key();
  double fx = get_cost(p, x, store, key);
  Tangent g = get_gradient(p, x, store, key);
  double gnorm = M.norm(x, g);
  std::optional<double> prev_decrease;

  IterationRecord rec;
  rec.iter = 0;
  rec.cost = fx;
  rec.grad_norm = gnorm;
  std::optional<StopReason> stop = log.push(rec);

  for (std::size_t iter = 1; !stop; ++iter) {
    IterationRecord next;
    next.iter = iter;
    if (gnorm > 0.0) {
      const Tangent d = -g;
      const double slope = -gnorm * gnorm;
      const double t0 = detail::initial_step(p, store, x, key, d, slope,
                                             prev_decrease, opts);
      detail::LineSearchResult ls =
          detail::armijo_backtracking(p, store, x, fx, d, slope, t0, opts);
      if (!ls.success) {
        stop = StopReason::kStepCollapse;
        break;
      }
      store.discard(key);
      prev_decrease = fx - ls.cost;
      x = std::move(ls.x);
      key = ls.key;
      fx = ls.cost;
      g = get_gradient(p, x, store, key);
      next.step_size = ls.t * gnorm;
      gnorm = M.norm(x, g);
    }
    next.cost = fx;
    next.grad_norm = gnorm;
    stop = log.push(next);
  }

  RunResult result;
  result.x_final = std::move(x);
  result.cost_final = fx;
  result.grad_norm_final = gnorm;
  log.finish(result, *stop, store);
  return result;
}

}  // namespace ropt
