#include <cmath>
#include <numbers>

#include "dense_manifold.hpp"
#include "ropt/manifolds.hpp"

namespace ropt {
namespace {

// Product of unit spheres laid out as the columns (oblique manifold) or the
// rows (elliptope factors) of a matrix. All operations are the sphere
// operations applied slice by slice.
class UnitSlices final : public detail::DenseManifold {
 public:
  enum class Axis { kColumns, kRows };

  UnitSlices(Eigen::Index rows, Eigen::Index cols, Axis axis, std::string label,
             double typical_dist)
      : DenseManifold(rows, cols),
        axis_(axis),
        label_(std::move(label)),
        typical_dist_(typical_dist) {}

  std::string name() const override { return label_; }
  std::size_t dim() const override {
    const Eigen::Index len = slice_length();
    const Eigen::Index count = axis_ == Axis::kColumns ? cols_ : rows_;
    return static_cast<std::size_t>((len - 1) * count);
  }
  double typical_dist() const override { return typical_dist_; }

 protected:
  Tangent do_proj(const Point& x, const Ambient& z) const override {
    const auto& X = x.matrix();
    const auto& Z = z.matrix();
    return Eigen::MatrixXd(Z - scale_slices(X, slice_inner(X, Z)));
  }

  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    Eigen::MatrixXd Y = x.matrix() + t * u.matrix();
    return normalize(Y);
  }

  Tangent do_ehess2rhess(const Point& x, const Ambient& egrad,
                         const Ambient& ehess_u,
                         const Tangent& u) const override {
    const Eigen::VectorXd radial = slice_inner(x.matrix(), egrad.matrix());
    Tangent h = do_proj(x, ehess_u);
    h.matrix() -= scale_slices(u.matrix(), radial);
    return h;
  }

  Point do_rand_point(Rng& rng) const override {
    for (;;) {
      Eigen::MatrixXd Y = gaussian_matrix(rows_, cols_, rng);
      try {
        return normalize(Y);
      } catch (const DegenerateStepError&) {
        // Probability zero; draw again.
      }
    }
  }

  double do_constraint_violation(const Point& x) const override {
    const auto& X = x.matrix();
    const Eigen::VectorXd sq = slice_inner(X, X);
    return sq.size() == 0 ? 0.0 : (sq.array() - 1.0).abs().maxCoeff();
  }

 private:
  Eigen::Index slice_length() const {
    return axis_ == Axis::kColumns ? rows_ : cols_;
  }

  // Inner products <A_i, B_i> of corresponding slices.
  Eigen::VectorXd slice_inner(const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& B) const {
    if (axis_ == Axis::kColumns) {
      return A.cwiseProduct(B).colwise().sum().transpose();
    }
    return A.cwiseProduct(B).rowwise().sum();
  }

  // Slice i of A multiplied by w_i.
  Eigen::MatrixXd scale_slices(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& w) const {
    if (axis_ == Axis::kColumns) return A * w.asDiagonal();
    return w.asDiagonal() * A;
  }

  Point normalize(const Eigen::MatrixXd& Y) const {
    Eigen::VectorXd norms = slice_inner(Y, Y).cwiseSqrt();
    for (Eigen::Index i = 0; i < norms.size(); ++i) {
      if (!(norms(i) > 0.0)) {
        throw DegenerateStepError(name() + ": slice " + std::to_string(i) +
                                  " has zero norm");
      }
    }
    return Eigen::MatrixXd(scale_slices(Y, norms.cwiseInverse()));
  }

  Axis axis_;
  std::string label_;
  double typical_dist_;
};

}  // namespace

ManifoldDescriptor oblique_factory(Eigen::Index n, Eigen::Index m) {
  if (n < 1 || m < 1) throw ArgumentError("oblique_factory: need n, m >= 1");
  return std::make_shared<UnitSlices>(
      n, m, UnitSlices::Axis::kColumns,
      "Oblique manifold OB(" + std::to_string(n) + ", " + std::to_string(m) +
          ")",
      std::numbers::pi * std::sqrt(static_cast<double>(m)));
}

ManifoldDescriptor elliptope_factory(Eigen::Index n, Eigen::Index k) {
  if (k < 1 || k > n) throw ArgumentError("elliptope_factory: need 1 <= k <= n");
  return std::make_shared<UnitSlices>(
      n, k, UnitSlices::Axis::kRows,
      "Elliptope factors " + std::to_string(n) + "x" + std::to_string(k) +
          " (unit diagonal, rank " + std::to_string(k) + ")",
      std::numbers::pi * std::sqrt(static_cast<double>(n)));
}

}  // namespace ropt
