// Embedded geometry of m x n matrices of rank k.
//
// A point X = U diag(s) V' is kept in factored form, and a tangent vector at
// X is the triple (M, Up, Vp) standing for U M V' + Up V' + U Vp' with
// U'Up = 0 and V'Vp = 0. Ambient vectors may be dense or a sum of low-rank
// terms; nothing in this file forms an m x n matrix except random sampling.

#include <Eigen/SVD>

#include <cmath>

#include "ropt/manifolds.hpp"

namespace ropt {
namespace {

constexpr double kRankFloor = 1e-14;

class FixedRank final : public Manifold {
 public:
  FixedRank(Eigen::Index m, Eigen::Index n, Eigen::Index k)
      : m_(m), n_(n), k_(k) {}

  std::string name() const override {
    return "Fixed-rank matrices " + std::to_string(m_) + "x" +
           std::to_string(n_) + " of rank " + std::to_string(k_) +
           " (embedded geometry)";
  }
  std::size_t dim() const override {
    return static_cast<std::size_t>((m_ + n_ - k_) * k_);
  }
  double typical_dist() const override {
    return std::sqrt(static_cast<double>(dim()));
  }
  bool has_exact_hessian_conversion() const override { return false; }

  void check_point(const Point& x) const override {
    bool ok = x.is_low_rank();
    if (ok) {
      const auto& f = x.low_rank();
      ok = f.U.rows() == m_ && f.U.cols() == k_ && f.s.size() == k_ &&
           f.V.rows() == n_ && f.V.cols() == k_;
    }
    if (!ok) throw DimensionError(name() + ": point must be a (U, s, V) triple");
  }

  void check_tangent(const Point& x, const Tangent& u) const override {
    check_point(x);
    bool ok = u.is_low_rank();
    if (ok) {
      const auto& t = u.low_rank();
      ok = t.M.rows() == k_ && t.M.cols() == k_ && t.Up.rows() == m_ &&
           t.Up.cols() == k_ && t.Vp.rows() == n_ && t.Vp.cols() == k_;
    }
    if (!ok) {
      throw DimensionError(name() + ": tangent must be an (M, Up, Vp) triple");
    }
  }

  void check_ambient(const Point& x, const Ambient& z) const override {
    check_point(x);
    bool ok = false;
    if (z.is_matrix()) {
      ok = z.matrix().rows() == m_ && z.matrix().cols() == n_;
    } else if (z.is_low_rank()) {
      ok = z.low_rank().rows == m_ && z.low_rank().cols == n_;
    }
    if (!ok) {
      throw DimensionError(name() + ": ambient vector must be " +
                           std::to_string(m_) + "x" + std::to_string(n_));
    }
  }

 protected:
  Tangent do_proj(const Point& x, const Ambient& z) const override {
    const auto& f = x.low_rank();
    Eigen::MatrixXd ZV;
    Eigen::MatrixXd ZtU;
    if (z.is_matrix()) {
      ZV = z.matrix() * f.V;
      ZtU = z.matrix().transpose() * f.U;
    } else {
      ZV = z.low_rank().times(f.V);
      ZtU = z.low_rank().transpose_times(f.U);
    }
    LowRankTangent t;
    t.M = f.U.transpose() * ZV;
    t.Up = ZV - f.U * t.M;
    t.Vp = ZtU - f.V * t.M.transpose();
    return t;
  }

  // Metric projection (rank-k truncated SVD) of X + t*xi, through QR
  // factors of [U Up] and [V Vp] and an SVD of a 2k x 2k core.
  Point do_retract(const Point& x, const Tangent& u, double t) const override {
    const auto& f = x.low_rank();
    const auto& xi = u.low_rank();

    Eigen::MatrixXd left(m_, 2 * k_);
    left << f.U, xi.Up;
    Eigen::MatrixXd right(n_, 2 * k_);
    right << f.V, xi.Vp;
    const ThinQR ql = thin_qr(left);
    const ThinQR qr = thin_qr(right);

    Eigen::MatrixXd core = Eigen::MatrixXd::Zero(2 * k_, 2 * k_);
    core.topLeftCorner(k_, k_) = Eigen::MatrixXd(f.s.asDiagonal()) + t * xi.M;
    core.topRightCorner(k_, k_) =
        t * Eigen::MatrixXd::Identity(k_, k_);
    core.bottomLeftCorner(k_, k_) =
        t * Eigen::MatrixXd::Identity(k_, k_);
    const Eigen::MatrixXd small = ql.R * core * qr.R.transpose();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        small, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    if (sigma.size() < k_ || !(sigma(k_ - 1) >= kRankFloor)) {
      throw RankCollapseError(name() +
                              ": retraction lost rank (k-th singular value " +
                              std::to_string(sigma.size() < k_ ? 0.0
                                                               : sigma(k_ - 1)) +
                              ")");
    }
    LowRankPoint out;
    out.U = ql.Q * svd.matrixU().leftCols(k_);
    out.s = sigma.head(k_);
    out.V = qr.Q * svd.matrixV().leftCols(k_);
    return out;
  }

  Tangent do_ehess2rhess(const Point&, const Ambient&, const Ambient&,
                         const Tangent&) const override {
    throw UnsupportedOperationError(
        name() + ": no exact Hessian conversion; use the finite-difference "
                 "Hessian approximation");
  }

  Point do_rand_point(Rng& rng) const override {
    for (;;) {
      const Eigen::MatrixXd A = gaussian_matrix(m_, n_, rng);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(
          A, Eigen::ComputeThinU | Eigen::ComputeThinV);
      if (svd.singularValues()(k_ - 1) < kRankFloor) continue;
      LowRankPoint p;
      p.U = svd.matrixU().leftCols(k_);
      p.s = svd.singularValues().head(k_);
      p.V = svd.matrixV().leftCols(k_);
      return p;
    }
  }

  Tangent do_zero_tangent(const Point&) const override {
    LowRankTangent t;
    t.M = Eigen::MatrixXd::Zero(k_, k_);
    t.Up = Eigen::MatrixXd::Zero(m_, k_);
    t.Vp = Eigen::MatrixXd::Zero(n_, k_);
    return t;
  }

  Ambient do_tangent_to_ambient(const Point& x,
                                const Tangent& u) const override {
    const auto& f = x.low_rank();
    const auto& xi = u.low_rank();
    Eigen::MatrixXd A(m_, 2 * k_);
    A << f.U * xi.M + xi.Up, f.U;
    Eigen::MatrixXd B(n_, 2 * k_);
    B << f.V, xi.Vp;
    return LowRankAmbient::from_factors(std::move(A), std::move(B));
  }

  Ambient do_point_to_ambient(const Point& x) const override {
    const auto& f = x.low_rank();
    return LowRankAmbient::from_factors(f.U * f.s.asDiagonal(), f.V);
  }

  Ambient do_rand_ambient(const Point&, Rng& rng) const override {
    return gaussian_matrix(m_, n_, rng);
  }

  double do_constraint_violation(const Point& x) const override {
    const auto& f = x.low_rank();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k_, k_);
    double v = std::max((f.U.transpose() * f.U - I).cwiseAbs().maxCoeff(),
                        (f.V.transpose() * f.V - I).cwiseAbs().maxCoeff());
    if (f.s.minCoeff() <= 0.0) v = std::max(v, -f.s.minCoeff() + 1.0);
    return v;
  }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::Index k_;
};

}  // namespace

ManifoldDescriptor fixed_rank_factory(Eigen::Index m, Eigen::Index n,
                                      Eigen::Index k) {
  if (k < 1 || k > std::min(m, n)) {
    throw ArgumentError("fixed_rank_factory: need 1 <= k <= min(m, n)");
  }
  return std::make_shared<FixedRank>(m, n, k);
}

}  // namespace ropt
