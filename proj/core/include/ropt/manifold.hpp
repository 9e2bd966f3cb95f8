#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "ropt/element.hpp"
#include "ropt/linalg.hpp"

namespace ropt {

/// Geometry of a Riemannian search space.
///
/// Instances are immutable once built by a factory and are shared through
/// ManifoldDescriptor. Points and tangent vectors are plain values; tangent
/// vectors do not remember their base point, so every operation takes it
/// explicitly.
///
/// Public geometry entry points validate operand shapes and then dispatch to
/// the protected virtual hooks.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  /// Intrinsic dimension.
  virtual std::size_t dim() const = 0;
  /// Scale used to size trust-region radii and finite-difference steps.
  virtual double typical_dist() const = 0;
  /// True when retract() agrees with geodesics to second order, which is what
  /// the Hessian slope test assumes.
  virtual bool second_order_retraction() const { return true; }
  /// False when ehess2rhess() is unavailable and Hessians must be
  /// approximated from gradients.
  virtual bool has_exact_hessian_conversion() const { return true; }

  /// Riemannian metric.
  double inner(const Point& x, const Tangent& u, const Tangent& v) const;
  double norm(const Point& x, const Tangent& u) const;

  /// Orthogonal projection of an ambient vector onto T_x M.
  Tangent proj(const Point& x, const Ambient& z) const;

  /// Moves from x along t*u. retract(x, u, 0) and retract(x, 0, t) return x
  /// unchanged.
  Point retract(const Point& x, const Tangent& u, double t = 1.0) const;

  Tangent egrad2rgrad(const Point& x, const Ambient& egrad) const;

  /// Riemannian Hessian applied to u, from the Euclidean gradient and the
  /// directional derivative of the Euclidean gradient along u.
  Tangent ehess2rhess(const Point& x, const Ambient& egrad,
                      const Ambient& ehess_u, const Tangent& u) const;

  Point rand_point(Rng& rng) const;

  /// Random unit-norm tangent vector at x.
  Tangent rand_tangent(const Point& x, Rng& rng) const;

  /// Projection-based vector transport of u from T_x M to T_y M.
  Tangent transport(const Point& x, const Point& y, const Tangent& u) const;

  Tangent zero_tangent(const Point& x) const;

  /// The tangent vector u at x written in ambient coordinates.
  Ambient tangent_to_ambient(const Point& x, const Tangent& u) const;

  /// The point x written in ambient coordinates.
  Ambient point_to_ambient(const Point& x) const;

  /// Standard Gaussian sample in the ambient space at x.
  Ambient rand_ambient(const Point& x, Rng& rng) const;

  /// Max-norm residual of the defining constraints at x.
  double constraint_violation(const Point& x) const;

  /// Throws DimensionError unless x has this manifold's point layout.
  virtual void check_point(const Point& x) const = 0;
  virtual void check_tangent(const Point& x, const Tangent& u) const = 0;
  virtual void check_ambient(const Point& x, const Ambient& z) const = 0;

 protected:
  virtual Tangent do_proj(const Point& x, const Ambient& z) const = 0;
  virtual Point do_retract(const Point& x, const Tangent& u,
                           double t) const = 0;
  virtual Tangent do_egrad2rgrad(const Point& x, const Ambient& egrad) const {
    return do_proj(x, egrad);
  }
  virtual Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                                 const Ambient& ehess_u,
                                 const Tangent& u) const = 0;
  virtual Point do_rand_point(Rng& rng) const = 0;
  virtual Tangent do_transport(const Point& x, const Point& y,
                               const Tangent& u) const {
    return do_proj(y, do_tangent_to_ambient(x, u));
  }
  virtual double do_inner(const Point& x, const Tangent& u,
                          const Tangent& v) const;
  virtual Tangent do_zero_tangent(const Point& x) const;
  virtual Ambient do_tangent_to_ambient(const Point& x,
                                        const Tangent& u) const;
  virtual Ambient do_point_to_ambient(const Point& x) const;
  virtual Ambient do_rand_ambient(const Point& x, Rng& rng) const;
  virtual double do_constraint_violation(const Point& x) const = 0;
};

/// Immutable, shareable handle to a manifold's geometry.
using ManifoldDescriptor = std::shared_ptr<const Manifold>;

/// Element-for-element copy between representations of matrix-only
/// structures (dense or product of dense).
Ambient as_ambient(const Tangent& u);
Tangent as_tangent(const Ambient& z);
Ambient as_ambient(const Point& x);

}  // namespace ropt
