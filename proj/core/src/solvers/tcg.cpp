#include <algorithm>
#include <cmath>

#include "ropt/solvers.hpp"

namespace ropt {

std::string to_string(TcgStop s) {
  switch (s) {
    case TcgStop::kNegativeCurvature:
      return "negative curvature";
    case TcgStop::kExceededTrustRegion:
      return "exceeded trust region";
    case TcgStop::kResidualLinear:
      return "reached target residual-kappa (linear)";
    case TcgStop::kResidualSuperlinear:
      return "reached target residual-theta (superlinear)";
    case TcgStop::kMaxInner:
      return "maximum inner iterations";
  }
  return "unknown";
}

// Lengths are measured in the norm ||v||_P^2 = <v, P^{-1} v>. The quantities
// <eta, P^{-1} eta>, <eta, P^{-1} delta> and <delta, P^{-1} delta> are
// updated by recurrences, so P^{-1} is never applied.
TcgResult tcg_subsolver(const ProblemDef& p, const Point& x, const Tangent& g,
                        double Delta, double kappa, double theta,
                        std::size_t max_inner, CacheStore& store, PointKey key,
                        std::size_t min_inner) {
  const Manifold& M = *p.manifold;
  TcgResult out;
  out.eta = M.zero_tangent(x);
  out.Heta = M.zero_tangent(x);

  Tangent r = g;
  const double norm_r0 = M.norm(x, r);
  if (norm_r0 == 0.0) {
    out.stop = TcgStop::kResidualLinear;
    return out;
  }
  Tangent z = get_precon(p, x, r, store, key);
  double z_r = M.inner(x, z, r);
  double d_Pd = z_r;
  Tangent delta = -z;
  double e_Pe = 0.0;
  double e_Pd = 0.0;
  const double Delta2 = Delta * Delta;

  for (std::size_t j = 0; j < max_inner; ++j) {
    out.inner_iterations = j + 1;
    const Tangent Hdelta = get_hessian(p, x, delta, store, key);
    const double d_Hd = M.inner(x, delta, Hdelta);
    const double alpha = z_r / d_Hd;
    const double e_Pe_new = e_Pe + 2.0 * alpha * e_Pd + alpha * alpha * d_Pd;

    if (d_Hd <= 0.0 || e_Pe_new >= Delta2) {
      // Step to the boundary: largest tau with ||eta + tau delta||_P = Delta.
      const double tau =
          (-e_Pd + std::sqrt(e_Pd * e_Pd + d_Pd * (Delta2 - e_Pe))) / d_Pd;
      axpy(tau, delta, out.eta);
      axpy(tau, Hdelta, out.Heta);
      out.stop = d_Hd <= 0.0 ? TcgStop::kNegativeCurvature
                             : TcgStop::kExceededTrustRegion;
      return out;
    }

    e_Pe = e_Pe_new;
    axpy(alpha, delta, out.eta);
    axpy(alpha, Hdelta, out.Heta);
    axpy(alpha, Hdelta, r);

    const double norm_r = M.norm(x, r);
    const double superlinear = std::pow(norm_r0, theta);
    if (j + 1 >= min_inner &&
        norm_r <= norm_r0 * std::min(superlinear, kappa)) {
      out.stop = kappa < superlinear ? TcgStop::kResidualLinear
                                     : TcgStop::kResidualSuperlinear;
      return out;
    }

    z = get_precon(p, x, r, store, key);
    const double z_r_old = z_r;
    z_r = M.inner(x, z, r);
    const double beta = z_r / z_r_old;
    scale(beta, delta);
    axpy(-1.0, z, delta);
    e_Pd = beta * (e_Pd + alpha * d_Pd);
    d_Pd = z_r + beta * beta * d_Pd;
  }
  out.stop = TcgStop::kMaxInner;
  return out;
}

}  // namespace ropt
