#include "ropt/manifold.hpp"

#include <cmath>

namespace ropt {

double Manifold::inner(const Point& x, const Tangent& u,
                       const Tangent& v) const {
  check_tangent(x, u);
  check_tangent(x, v);
  return do_inner(x, u, v);
}

double Manifold::norm(const Point& x, const Tangent& u) const {
  return std::sqrt(std::max(0.0, inner(x, u, u)));
}

Tangent Manifold::proj(const Point& x, const Ambient& z) const {
  check_point(x);
  check_ambient(x, z);
  return do_proj(x, z);
}

Point Manifold::retract(const Point& x, const Tangent& u, double t) const {
  check_tangent(x, u);
  if (t == 0.0 || is_zero(u)) return x;
  return do_retract(x, u, t);
}

Tangent Manifold::egrad2rgrad(const Point& x, const Ambient& egrad) const {
  check_point(x);
  check_ambient(x, egrad);
  return do_egrad2rgrad(x, egrad);
}

Tangent Manifold::ehess2rhess(const Point& x, const Ambient& egrad,
                              const Ambient& ehess_u, const Tangent& u) const {
  check_tangent(x, u);
  check_ambient(x, egrad);
  check_ambient(x, ehess_u);
  return do_ehess2rhess(x, egrad, ehess_u, u);
}

Point Manifold::rand_point(Rng& rng) const { return do_rand_point(rng); }

Tangent Manifold::rand_tangent(const Point& x, Rng& rng) const {
  check_point(x);
  constexpr int kRetries = 5;
  for (int attempt = 0; attempt <= kRetries; ++attempt) {
    const Ambient z = do_rand_ambient(x, rng);
    Tangent u = do_proj(x, z);
    const double n = std::sqrt(std::max(0.0, do_inner(x, u, u)));
    // Projections at rounding level mean the tangent space is trivial.
    const double floor = 1e-12 * std::sqrt(ambient_dot(z, z));
    if (n > floor && std::isfinite(n)) {
      scale(1.0 / n, u);
      return u;
    }
  }
  throw DegenerateStepError(name() +
                            ": random tangent projected to zero repeatedly");
}

Tangent Manifold::transport(const Point& x, const Point& y,
                            const Tangent& u) const {
  check_tangent(x, u);
  check_point(y);
  return do_transport(x, y, u);
}

Tangent Manifold::zero_tangent(const Point& x) const {
  check_point(x);
  return do_zero_tangent(x);
}

Ambient Manifold::tangent_to_ambient(const Point& x, const Tangent& u) const {
  check_tangent(x, u);
  return do_tangent_to_ambient(x, u);
}

Ambient Manifold::point_to_ambient(const Point& x) const {
  check_point(x);
  return do_point_to_ambient(x);
}

Ambient Manifold::rand_ambient(const Point& x, Rng& rng) const {
  check_point(x);
  return do_rand_ambient(x, rng);
}

double Manifold::constraint_violation(const Point& x) const {
  check_point(x);
  return do_constraint_violation(x);
}

double Manifold::do_inner(const Point& /*x*/, const Tangent& u,
                          const Tangent& v) const {
  return dot(u, v);
}

Tangent Manifold::do_zero_tangent(const Point& x) const {
  return Eigen::MatrixXd(Eigen::MatrixXd::Zero(x.matrix().rows(), x.matrix().cols()));
}

Ambient Manifold::do_tangent_to_ambient(const Point& /*x*/,
                                        const Tangent& u) const {
  return as_ambient(u);
}

Ambient Manifold::do_point_to_ambient(const Point& x) const {
  return as_ambient(x);
}

Ambient Manifold::do_rand_ambient(const Point& x, Rng& rng) const {
  return gaussian_matrix(x.matrix().rows(), x.matrix().cols(), rng);
}

namespace {

template <class To, class From>
Element<To> convert(const Element<From>& e) {
  if (e.is_matrix()) return Element<To>(e.matrix());
  if (e.is_product()) {
    typename Element<To>::Components out;
    out.reserve(e.components().size());
    for (const auto& c : e.components()) out.push_back(convert<To>(c));
    return Element<To>(std::move(out));
  }
  throw DimensionError(
      "low-rank element needs its manifold for ambient conversion");
}

}  // namespace

Ambient as_ambient(const Tangent& u) { return convert<LowRankAmbient>(u); }
Tangent as_tangent(const Ambient& z) { return convert<LowRankTangent>(z); }
Ambient as_ambient(const Point& x) { return convert<LowRankAmbient>(x); }

}  // namespace ropt
