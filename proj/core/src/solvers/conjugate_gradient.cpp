#include <algorithm>
#include <cmath>

#include "run_log.hpp"

namespace ropt {

RunResult conjugate_gradient(const ProblemDef& p, std::optional<Point> x0,
                             const SolverOptions& opts) {
  if (!p.manifold) throw ArgumentError("conjugate_gradient: no manifold");
  if (!has_gradient(p)) {
    throw MissingDerivativeError("conjugate_gradient needs a gradient");
  }
  const Manifold& M = *p.manifold;
  detail::RunLog log(opts, "CG");
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
  Tangent Pg = get_precon(p, x, g, store, key);
  double gPg = M.inner(x, g, Pg);
  Tangent d = -Pg;
  std::optional<double> prev_decrease;

  IterationRecord rec;
  rec.iter = 0;
  rec.cost = fx;
  rec.grad_norm = gnorm;
  std::optional<StopReason> stop = log.push(rec);

  for (std::size_t iter = 1; !stop; ++iter) {
    IterationRecord next;
    next.iter = iter;
    double slope = M.inner(x, g, d);
    if (!(slope < 0.0)) {
      // Not a descent direction: restart along the preconditioned gradient.
      d = -Pg;
      slope = -gPg;
    }
    if (gnorm > 0.0 && slope < 0.0) {
      const double t0 = detail::initial_step(p, store, x, key, d, slope,
                                             prev_decrease, opts);
      detail::LineSearchResult ls =
          detail::armijo_backtracking(p, store, x, fx, d, slope, t0, opts);
      if (!ls.success) {
        stop = StopReason::kStepCollapse;
        break;
      }
      const Tangent g1 = get_gradient(p, ls.x, store, ls.key);
      const Tangent Pg1 = get_precon(p, ls.x, g1, store, ls.key);
      const double g1Pg1 = M.inner(ls.x, g1, Pg1);

      double beta = 0.0;
      switch (opts.beta_rule) {
        case BetaRule::kPolakRibierePlus: {
          const Tangent Pg_moved = M.transport(x, ls.x, Pg);
          beta = std::max(0.0, M.inner(ls.x, g1, Pg1 - Pg_moved) / gPg);
          break;
        }
        case BetaRule::kFletcherReeves:
          beta = g1Pg1 / gPg;
          break;
        case BetaRule::kSteepestDescent:
          beta = 0.0;
          break;
      }
      Tangent d1 = -Pg1;
      if (beta != 0.0) axpy(beta, M.transport(x, ls.x, d), d1);
      if (M.inner(ls.x, d1, g1) >= 0.0) d1 = -Pg1;

      next.step_size = ls.t * M.norm(x, d);
      next.beta = beta;
      store.discard(key);
      prev_decrease = fx - ls.cost;
      x = std::move(ls.x);
      key = ls.key;
      fx = ls.cost;
      g = g1;
      Pg = Pg1;
      gPg = g1Pg1;
      d = std::move(d1);
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
