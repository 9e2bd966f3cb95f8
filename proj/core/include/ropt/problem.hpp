#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ropt/cache.hpp"
#include "ropt/manifold.hpp"

namespace ropt {

/// Optimization problem: a manifold plus the cost and whatever derivatives
/// the user can supply.
///
/// All callables receive the CacheEntry of the point being evaluated. The
/// set_* helpers also accept callables without the entry argument.
/// If both rgrad and egrad are given, rgrad is used. precond, when present,
/// must be a symmetric positive-definite operator on each tangent space.
struct ProblemDef {
  using CostFn = std::function<double(const Point&, CacheEntry&)>;
  using EgradFn = std::function<Ambient(const Point&, CacheEntry&)>;
  using RgradFn = std::function<Tangent(const Point&, CacheEntry&)>;
  using EhessFn =
      std::function<Ambient(const Point&, const Tangent&, CacheEntry&)>;
  using TangentOpFn =
      std::function<Tangent(const Point&, const Tangent&, CacheEntry&)>;

  ManifoldDescriptor manifold;
  CostFn cost;
  EgradFn egrad;
  RgradFn rgrad;
  EhessFn ehess;
  TangentOpFn rhess;
  TangentOpFn precond;

  template <class F>
  ProblemDef& set_cost(F f) {
    cost = wrap1<double>(std::move(f));
    return *this;
  }
  template <class F>
  ProblemDef& set_egrad(F f) {
    egrad = wrap1<Ambient>(std::move(f));
    return *this;
  }
  template <class F>
  ProblemDef& set_rgrad(F f) {
    rgrad = wrap1<Tangent>(std::move(f));
    return *this;
  }
  template <class F>
  ProblemDef& set_ehess(F f) {
    ehess = wrap2<Ambient>(std::move(f));
    return *this;
  }
  template <class F>
  ProblemDef& set_rhess(F f) {
    rhess = wrap2<Tangent>(std::move(f));
    return *this;
  }
  template <class F>
  ProblemDef& set_precond(F f) {
    precond = wrap2<Tangent>(std::move(f));
    return *this;
  }

 private:
  template <class R, class F>
  static std::function<R(const Point&, CacheEntry&)> wrap1(F f) {
    if constexpr (std::is_invocable_v<F&, const Point&, CacheEntry&>) {
      return f;
    } else {
      return [f = std::move(f)](const Point& x, CacheEntry&) -> R {
        return f(x);
      };
    }
  }
  template <class R, class F>
  static std::function<R(const Point&, const Tangent&, CacheEntry&)> wrap2(
      F f) {
    if constexpr (std::is_invocable_v<F&, const Point&, const Tangent&,
                                      CacheEntry&>) {
      return f;
    } else {
      return [f = std::move(f)](const Point& x, const Tangent& u,
                                CacheEntry&) -> R { return f(x, u); };
    }
  }
};

enum class HessianSource { kRiemannian, kEuclidean, kFiniteDifference };

bool has_gradient(const ProblemDef& p);

/// Where get_hessian() takes its values from for this problem.
HessianSource hessian_source(const ProblemDef& p);

/// f(x). Cached under key; a cache hit does not touch the counters.
double get_cost(const ProblemDef& p, const Point& x, CacheStore& store,
                PointKey key = kTransientKey);

/// Riemannian gradient: rgrad if supplied, else egrad2rgrad(egrad).
/// Throws MissingDerivativeError when neither is available.
Tangent get_gradient(const ProblemDef& p, const Point& x, CacheStore& store,
                     PointKey key = kTransientKey);

/// Riemannian Hessian applied to u, from rhess, then converted ehess, then
/// the finite-difference approximation (noted once per store).
Tangent get_hessian(const ProblemDef& p, const Point& x, const Tangent& u,
                    CacheStore& store, PointKey key = kTransientKey);

/// Preconditioner applied to u; identity when the problem has none.
Tangent get_precon(const ProblemDef& p, const Point& x, const Tangent& u,
                   CacheStore& store, PointKey key = kTransientKey);

/// Central difference of the gradient along u with step
/// 1e-4 * typical_dist / ||u||, the probe gradients carried back to T_x M by
/// projection. Exact when the gradient is linear.
Tangent approx_hessian_fd(const ProblemDef& p, const Point& x,
                          const Tangent& u, CacheStore& store,
                          PointKey key = kTransientKey);

struct ProblemReport {
  bool has_cost = false;
  bool has_egrad = false;
  bool has_rgrad = false;
  bool has_ehess = false;
  bool has_rhess = false;
  bool has_precond = false;

  bool gradient_solvers = false;  // steepest descent, CG
  bool hessian_solvers = false;   // trust regions
  bool fd_hessian = false;        // trust regions on approximate Hessians

  std::vector<std::string> messages;
  std::vector<std::string> probe_failures;

  bool ok() const { return has_cost && probe_failures.empty(); }
  std::string to_string() const;
};

/// Lists available derivatives and solver capabilities, and probes every
/// supplied callable once at a random point.
ProblemReport check_problem(const ProblemDef& p, std::uint64_t seed = 0);

}  // namespace ropt
