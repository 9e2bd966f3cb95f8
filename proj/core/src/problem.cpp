#include "ropt/problem.hpp"

#include <cmath>
#include <exception>
#include <sstream>

namespace ropt {
namespace {

constexpr double kFdStepScale = 1e-4;

// Runs a user callable, turning foreign exceptions into EvaluationError with
// the callable's role in the message. Library errors pass through.
template <class F>
auto call_user(const char* role, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw EvaluationError(std::string(role) + " evaluation failed: " +
                          e.what());
  }
}

void require_manifold(const ProblemDef& p) {
  if (!p.manifold) throw ArgumentError("problem has no manifold");
}

const Ambient& euclidean_gradient(const ProblemDef& p, const Point& x,
                                  CacheEntry& e) {
  if (!e.euclidean_gradient) {
    e.euclidean_gradient = call_user("egrad", [&] { return p.egrad(x, e); });
  }
  return *e.euclidean_gradient;
}

}  // namespace

bool has_gradient(const ProblemDef& p) {
  return static_cast<bool>(p.rgrad) || static_cast<bool>(p.egrad);
}

HessianSource hessian_source(const ProblemDef& p) {
  if (p.rhess) return HessianSource::kRiemannian;
  if (p.ehess && p.manifold && p.manifold->has_exact_hessian_conversion()) {
    return HessianSource::kEuclidean;
  }
  return HessianSource::kFiniteDifference;
}

double get_cost(const ProblemDef& p, const Point& x, CacheStore& store,
                PointKey key) {
  require_manifold(p);
  if (!p.cost) throw MissingDerivativeError("problem has no cost function");
  CacheEntry* entry = store.lookup(key);
  if (entry && entry->cost) return *entry->cost;
  CacheEntry scratch;
  CacheEntry& e = entry ? *entry : scratch;
  const double f = call_user("cost", [&] { return p.cost(x, e); });
  ++store.counters().cost_evals;
  e.cost = f;
  return f;
}

Tangent get_gradient(const ProblemDef& p, const Point& x, CacheStore& store,
                     PointKey key) {
  require_manifold(p);
  if (!has_gradient(p)) {
    throw MissingDerivativeError(
        "problem supplies neither 'rgrad' nor 'egrad'");
  }
  CacheEntry* entry = store.lookup(key);
  if (entry && entry->gradient) return *entry->gradient;
  CacheEntry scratch;
  CacheEntry& e = entry ? *entry : scratch;
  Tangent g;
  if (p.rgrad) {
    g = call_user("rgrad", [&] { return p.rgrad(x, e); });
    p.manifold->check_tangent(x, g);
  } else {
    g = p.manifold->egrad2rgrad(x, euclidean_gradient(p, x, e));
  }
  ++store.counters().grad_evals;
  e.gradient = g;
  return g;
}

Tangent get_hessian(const ProblemDef& p, const Point& x, const Tangent& u,
                    CacheStore& store, PointKey key) {
  require_manifold(p);
  switch (hessian_source(p)) {
    case HessianSource::kRiemannian: {
      CacheEntry* entry = store.lookup(key);
      CacheEntry scratch;
      CacheEntry& e = entry ? *entry : scratch;
      Tangent h = call_user("rhess", [&] { return p.rhess(x, u, e); });
      ++store.counters().hess_evals;
      return h;
    }
    case HessianSource::kEuclidean: {
      // Needs the Euclidean gradient too; evaluated through the same entry
      // so user-cached intermediates are shared.
      if (!p.egrad) {
        throw MissingDerivativeError(
            "converting 'ehess' requires 'egrad' as well");
      }
      CacheEntry* entry = store.lookup(key);
      CacheEntry scratch;
      CacheEntry& e = entry ? *entry : scratch;
      const Ambient& eg = euclidean_gradient(p, x, e);
      const Ambient ehu = call_user("ehess", [&] { return p.ehess(x, u, e); });
      ++store.counters().hess_evals;
      return p.manifold->ehess2rhess(x, eg, ehu, u);
    }
    case HessianSource::kFiniteDifference:
      store.note_once("Hessian approximated by finite differences of the "
                      "gradient");
      return approx_hessian_fd(p, x, u, store, key);
  }
  throw Error("unreachable");
}

Tangent get_precon(const ProblemDef& p, const Point& x, const Tangent& u,
                   CacheStore& store, PointKey key) {
  if (!p.precond) return u;
  CacheEntry* entry = store.lookup(key);
  CacheEntry scratch;
  CacheEntry& e = entry ? *entry : scratch;
  return call_user("precond", [&] { return p.precond(x, u, e); });
}

Tangent approx_hessian_fd(const ProblemDef& p, const Point& x,
                          const Tangent& u, CacheStore& store, PointKey) {
  require_manifold(p);
  const Manifold& M = *p.manifold;
  const double c = M.norm(x, u);
  if (c == 0.0) return M.zero_tangent(x);
  const double t = kFdStepScale * M.typical_dist() / c;
  const Point x_plus = M.retract(x, u, t);
  const Point x_minus = M.retract(x, u, -t);
  const Tangent g_plus = get_gradient(p, x_plus, store, kTransientKey);
  const Tangent g_minus = get_gradient(p, x_minus, store, kTransientKey);
  Tangent h = M.transport(x_plus, x, g_plus);
  axpy(-1.0, M.transport(x_minus, x, g_minus), h);
  scale(0.5 / t, h);
  ++store.counters().hess_evals;
  return h;
}

std::string ProblemReport::to_string() const {
  std::ostringstream os;
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  os << "cost: " << yn(has_cost) << ", egrad: " << yn(has_egrad)
     << ", rgrad: " << yn(has_rgrad) << ", ehess: " << yn(has_ehess)
     << ", rhess: " << yn(has_rhess) << ", precond: " << yn(has_precond)
     << "\n";
  for (const auto& m : messages) os << m << "\n";
  for (const auto& f : probe_failures) os << "probe failure: " << f << "\n";
  return os.str();
}

ProblemReport check_problem(const ProblemDef& p, std::uint64_t seed) {
  ProblemReport r;
  r.has_cost = static_cast<bool>(p.cost);
  r.has_egrad = static_cast<bool>(p.egrad);
  r.has_rgrad = static_cast<bool>(p.rgrad);
  r.has_ehess = static_cast<bool>(p.ehess);
  r.has_rhess = static_cast<bool>(p.rhess);
  r.has_precond = static_cast<bool>(p.precond);

  if (!p.manifold) {
    r.probe_failures.push_back("no manifold");
    return r;
  }
  if (!r.has_cost) r.messages.push_back("cost missing; nothing can be solved");

  r.gradient_solvers = r.has_cost && has_gradient(p);
  if (!has_gradient(p)) {
    r.messages.push_back("gradient missing; gradient-based solvers unavailable");
  } else {
    r.messages.push_back("gradient-based solvers available");
    const HessianSource src = hessian_source(p);
    if (src == HessianSource::kFiniteDifference) {
      r.fd_hessian = true;
      r.messages.push_back("Hessian via FD fallback");
      if (r.has_ehess) {
        r.messages.push_back("ehess ignored: manifold has no exact Hessian "
                             "conversion");
      }
    } else {
      r.hessian_solvers = true;
      r.messages.push_back("Hessian-based solvers available (exact Hessian)");
    }
  }

  Rng rng(seed);
  CacheStore store(false);
  const Manifold& M = *p.manifold;
  Point x;
  try {
    x = M.rand_point(rng);
  } catch (const std::exception& e) {
    r.probe_failures.push_back(std::string("rand_point: ") + e.what());
    return r;
  }
  if (r.has_cost) {
    try {
      const double f = get_cost(p, x, store);
      if (!std::isfinite(f)) r.probe_failures.push_back("cost is not finite");
    } catch (const std::exception& e) {
      r.probe_failures.push_back(std::string("cost: ") + e.what());
    }
  }
  if (has_gradient(p)) {
    try {
      (void)get_gradient(p, x, store);
    } catch (const std::exception& e) {
      r.probe_failures.push_back(std::string("gradient: ") + e.what());
      return r;
    }
    if (M.dim() > 0) {
      try {
        const Tangent u = M.rand_tangent(x, rng);
        const Tangent h = get_hessian(p, x, u, store);
        M.check_tangent(x, h);
        if (p.precond) M.check_tangent(x, get_precon(p, x, u, store));
      } catch (const std::exception& e) {
        r.probe_failures.push_back(std::string("hessian/precond: ") +
                                   e.what());
      }
    }
  }
  return r;
}

}  // namespace ropt
