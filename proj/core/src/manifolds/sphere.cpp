#include <cmath>
#include <numbers>

#include "dense_manifold.hpp"
#include "ropt/manifolds.hpp"

namespace ropt {
namespace {

// Unit Frobenius-norm sphere in R^{rows x cols}. Covers both the sphere
// (cols == 1) and the fixed-rank spectrahedron factor space.
class FrobeniusSphere final : public detail::DenseManifold {
 public:
  FrobeniusSphere(Eigen::Index rows, Eigen::Index cols, std::string label,
                  double typical_dist)
      : DenseManifold(rows, cols),
        label_(std::move(label)),
        typical_dist_(typical_dist) {}

  std::string name() const override { return label_; }
  std::size_t dim() const override {
    return static_cast<std::size_t>(rows_ * cols_ - 1);
  }
  double typical_dist() const override { return typical_dist_; }

 protected:
  Tangent do_proj(const Point& x, const Ambient& z) const override {
    const auto& X = x.matrix();
    const auto& Z = z.matrix();
    return Eigen::MatrixXd(Z - X.cwiseProduct(Z).sum() * X);
  }

  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    Eigen::MatrixXd Y = x.matrix() + t * u.matrix();
    const double n = Y.norm();
    if (!(n > 0.0)) {
      throw DegenerateStepError(name() + ": retraction hit the origin");
    }
    return Eigen::MatrixXd(Y / n);
  }

  Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                         const Ambient& ehess_u,
                         const Tangent& u) const override {
    const double radial = x.matrix().cwiseProduct(egrad.matrix()).sum();
    Tangent h = do_proj(x, ehess_u);
    h.matrix() -= radial * u.matrix();
    return h;
  }

  Point do_rand_point(Rng& rng) const override {
    for (;;) {
      Eigen::MatrixXd Y = gaussian_matrix(rows_, cols_, rng);
      const double n = Y.norm();
      if (n > 0.0) return Eigen::MatrixXd(Y / n);
    }
  }

  double do_constraint_violation(const Point& x) const override {
    return std::abs(x.matrix().squaredNorm() - 1.0);
  }

 private:
  std::string label_;
  double typical_dist_;
};

}  // namespace

ManifoldDescriptor sphere_factory(Eigen::Index n) {
  if (n < 1) throw ArgumentError("sphere_factory: n must be >= 1");
  return std::make_shared<FrobeniusSphere>(
      n, 1, "Sphere S^" + std::to_string(n - 1) + " in R^" + std::to_string(n),
      std::numbers::pi);
}

ManifoldDescriptor spectrahedron_factory(Eigen::Index n, Eigen::Index k) {
  if (k < 1 || k > n) {
    throw ArgumentError("spectrahedron_factory: need 1 <= k <= n");
  }
  return std::make_shared<FrobeniusSphere>(
      n, k,
      "Spectrahedron factors " + std::to_string(n) + "x" + std::to_string(k) +
          " (unit trace, rank " + std::to_string(k) + ")",
      std::numbers::pi);
}

}  // namespace ropt
