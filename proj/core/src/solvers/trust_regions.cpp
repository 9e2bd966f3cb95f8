#include <algorithm>
#include <cmath>
#include <iostream>

#include "run_log.hpp"

namespace ropt {

RunResult trust_regions(const ProblemDef& p, std::optional<Point> x0,
                        const SolverOptions& opts) {
  if (!p.manifold) throw ArgumentError("trust_regions: no manifold");
  if (!has_gradient(p)) {
    throw MissingDerivativeError("trust_regions needs a gradient");
  }
  const Manifold& M = *p.manifold;
  detail::RunLog log(opts, "RTR");
  CacheStore store(opts.use_cache);

  const bool fd_hessian =
      hessian_source(p) == HessianSource::kFiniteDifference;
  const double Delta_bar = opts.Delta_bar.value_or(M.typical_dist());
  double Delta = opts.Delta0.value_or(Delta_bar / 8.0);
  // Finite-difference noise defeats superlinear residual targets.
  const double theta = opts.theta.value_or(fd_hessian ? 0.0 : 1.0);
  const std::size_t max_inner =
      opts.max_inner.value_or(std::max<std::size_t>(1, 2 * M.dim()));
  const double Delta_floor = 1e-16 * Delta_bar;

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

  IterationRecord rec;
  rec.iter = 0;
  rec.cost = fx;
  rec.grad_norm = gnorm;
  rec.Delta = Delta;
  std::optional<StopReason> stop = log.push(rec);

  for (std::size_t iter = 1; !stop; ++iter) {
    const TcgResult tcg = tcg_subsolver(p, x, g, Delta, opts.kappa, theta,
                                        max_inner, store, key, opts.min_inner);

    const PointKey key1 = store.new_key();
    Point x1;
    double f1 = std::numeric_limits<double>::infinity();
    try {
      x1 = M.retract(x, tcg.eta);
      f1 = get_cost(p, x1, store, key1);
    } catch (const DegenerateStepError&) {
    } catch (const RankCollapseError&) {
    }

    const double model_decrease =
        -(M.inner(x, g, tcg.eta) + 0.5 * M.inner(x, tcg.eta, tcg.Heta));
    const double rho_reg = 1e-15 * std::max(1.0, std::abs(fx));
    const double rho_num = fx - f1 + rho_reg;
    const double rho_den = model_decrease + rho_reg;
    const bool model_ok = rho_den > 0.0;
    const double rho = model_ok ? rho_num / rho_den
                                : -std::numeric_limits<double>::infinity();

    if (!(rho >= 0.25)) {
      Delta /= 4.0;
    } else if (rho > 0.75 && tcg.hit_boundary()) {
      Delta = std::min(2.0 * Delta, Delta_bar);
    }
    const bool accept = model_ok && rho > opts.rho_prime;

    IterationRecord next;
    next.iter = iter;
    next.inner_iterations = static_cast<int>(tcg.inner_iterations);
    next.rho = rho;
    next.accepted = accept;
    if (accept) {
      next.step_size = M.norm(x, tcg.eta);
      store.discard(key);
      x = std::move(x1);
      key = key1;
      fx = f1;
      g = get_gradient(p, x, store, key);
      gnorm = M.norm(x, g);
    } else {
      store.discard(key1);
    }
    next.Delta = Delta;
    next.cost = fx;
    next.grad_norm = gnorm;
    if (opts.verbosity >= 3) {
      std::ostream& os = opts.log ? *opts.log : std::cout;
      os << "  tCG: " << to_string(tcg.stop) << "\n";
    }
    stop = log.push(next);
    if (!stop && Delta < Delta_floor) stop = StopReason::kStepCollapse;
  }

  RunResult result;
  result.x_final = std::move(x);
  result.cost_final = fx;
  result.grad_norm_final = gnorm;
  log.finish(result, *stop, store);
  return result;
}

}  // namespace ropt
