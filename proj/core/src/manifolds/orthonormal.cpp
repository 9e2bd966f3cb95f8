// Manifolds of orthonormal frames: Stiefel, Grassmann and SO(n). All three
// retract with the Q factor of a thin QR (positive diagonal R).

#include <cmath>
#include <numbers>

#include "dense_manifold.hpp"
#include "ropt/manifolds.hpp"

namespace ropt {
namespace {

double orthonormality_residual(const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd G =
      X.transpose() * X - Eigen::MatrixXd::Identity(X.cols(), X.cols());
  return G.size() == 0 ? 0.0 : G.cwiseAbs().maxCoeff();
}

class Stiefel final : public detail::DenseManifold {
 public:
  Stiefel(Eigen::Index n, Eigen::Index p) : DenseManifold(n, p) {}

  std::string name() const override {
    return "Stiefel manifold St(" + std::to_string(rows_) + ", " +
           std::to_string(cols_) + ")";
  }
  std::size_t dim() const override {
    return static_cast<std::size_t>(rows_ * cols_ -
                                    cols_ * (cols_ + 1) / 2);
  }
  double typical_dist() const override {
    return std::numbers::pi * std::sqrt(static_cast<double>(cols_));
  }
  // The QR retraction matches geodesics only to first order.
  bool second_order_retraction() const override { return false; }

 protected:
  Tangent do_proj(const Point& x, const Ambient& z) const override {
    const auto& X = x.matrix();
    const auto& Z = z.matrix();
    return Eigen::MatrixXd(Z - X * sym(X.transpose() * Z));
  }

  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    return qf(x.matrix() + t * u.matrix());
  }

  Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                         const Ambient& ehess_u,
                         const Tangent& u) const override {
    const auto& X = x.matrix();
    const Eigen::MatrixXd correction =
        u.matrix() * sym(X.transpose() * egrad.matrix());
    return do_proj(x, Eigen::MatrixXd(ehess_u.matrix() - correction));
  }

  Point do_rand_point(Rng& rng) const override {
    return qf(gaussian_matrix(rows_, cols_, rng));
  }

  double do_constraint_violation(const Point& x) const override {
    return orthonormality_residual(x.matrix());
  }
};

class Grassmann final : public detail::DenseManifold {
 public:
  Grassmann(Eigen::Index n, Eigen::Index p) : DenseManifold(n, p) {}

  std::string name() const override {
    return "Grassmann manifold Gr(" + std::to_string(rows_) + ", " +
           std::to_string(cols_) + ")";
  }
  std::size_t dim() const override {
    return static_cast<std::size_t>(cols_ * (rows_ - cols_));
  }
  double typical_dist() const override {
    return std::numbers::pi * std::sqrt(static_cast<double>(cols_));
  }

 protected:
  // Horizontal space at X: {Z : X'Z = 0}.
  Tangent do_proj(const Point& x, const Ambient& z) const override {
    const auto& X = x.matrix();
    const auto& Z = z.matrix();
    return Eigen::MatrixXd(Z - X * (X.transpose() * Z));
  }

  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    return qf(x.matrix() + t * u.matrix());
  }

  Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                         const Ambient& ehess_u,
                         const Tangent& u) const override {
    const auto& X = x.matrix();
    Tangent h = do_proj(x, ehess_u);
    h.matrix() -= u.matrix() * (X.transpose() * egrad.matrix());
    return h;
  }

  Point do_rand_point(Rng& rng) const override {
    return qf(gaussian_matrix(rows_, cols_, rng));
  }

  double do_constraint_violation(const Point& x) const override {
    return orthonormality_residual(x.matrix());
  }
};

class Rotations final : public detail::DenseManifold {
 public:
  explicit Rotations(Eigen::Index n) : DenseManifold(n, n) {}

  std::string name() const override {
    return "Rotation group SO(" + std::to_string(rows_) + ")";
  }
  std::size_t dim() const override {
    return static_cast<std::size_t>(rows_ * (rows_ - 1) / 2);
  }
  double typical_dist() const override {
    return std::numbers::pi * std::sqrt(static_cast<double>(dim())) / 2.0;
  }
  bool second_order_retraction() const override { return false; }

 protected:
  Tangent do_proj(const Point& x, const Ambient& z) const override {
    const auto& X = x.matrix();
    return Eigen::MatrixXd(X * skew(X.transpose() * z.matrix()));
  }

  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    return special_qf(x.matrix() + t * u.matrix());
  }

  // Same Weingarten correction as on the Stiefel manifold, of which SO(n) is
  // an open subset for p = n.
  Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                         const Ambient& ehess_u,
                         const Tangent& u) const override {
    const auto& X = x.matrix();
    const Eigen::MatrixXd correction =
        u.matrix() * sym(X.transpose() * egrad.matrix());
    return do_proj(x, Eigen::MatrixXd(ehess_u.matrix() - correction));
  }

  Point do_rand_point(Rng& rng) const override {
    return special_qf(gaussian_matrix(rows_, rows_, rng));
  }

  double do_constraint_violation(const Point& x) const override {
    const auto& X = x.matrix();
    return std::max(orthonormality_residual(X), std::abs(X.determinant() - 1.0));
  }

 private:
  // Q factor, with the last column flipped when det(Q) = -1.
  static Eigen::MatrixXd special_qf(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd Q = qf(A);
    if (Q.determinant() < 0.0) Q.col(Q.cols() - 1) *= -1.0;
    return Q;
  }
};

class Euclidean final : public detail::DenseManifold {
 public:
  Euclidean(Eigen::Index rows, Eigen::Index cols) : DenseManifold(rows, cols) {}

  std::string name() const override {
    return "Euclidean space R^(" + std::to_string(rows_) + "x" +
           std::to_string(cols_) + ")";
  }
  std::size_t dim() const override {
    return static_cast<std::size_t>(rows_ * cols_);
  }
  double typical_dist() const override {
    return std::sqrt(static_cast<double>(dim()));
  }

 protected:
  Tangent do_proj(const Point&, const Ambient& z) const override {
    return z.matrix();
  }
  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    return Eigen::MatrixXd(x.matrix() + t * u.matrix());
  }
  Tangent do_ehess2rhess(const Point&, const Ambient&, const Ambient& ehess_u,
                         const Tangent&) const override {
    return ehess_u.matrix();
  }
  Point do_rand_point(Rng& rng) const override {
    return gaussian_matrix(rows_, cols_, rng);
  }
  double do_constraint_violation(const Point&) const override { return 0.0; }
};

}  // namespace

ManifoldDescriptor stiefel_factory(Eigen::Index n, Eigen::Index p) {
  if (p < 1 || p > n) throw ArgumentError("stiefel_factory: need 1 <= p <= n");
  return std::make_shared<Stiefel>(n, p);
}

ManifoldDescriptor grassmann_factory(Eigen::Index n, Eigen::Index p) {
  if (p < 1 || p > n) {
    throw ArgumentError("grassmann_factory: need 1 <= p <= n");
  }
  return std::make_shared<Grassmann>(n, p);
}

ManifoldDescriptor rotations_factory(Eigen::Index n) {
  if (n < 1) throw ArgumentError("rotations_factory: n must be >= 1");
  return std::make_shared<Rotations>(n);
}

ManifoldDescriptor euclidean_factory(Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1) {
    throw ArgumentError("euclidean_factory: dimensions must be positive");
  }
  return std::make_shared<Euclidean>(rows, cols);
}

}  // namespace ropt
