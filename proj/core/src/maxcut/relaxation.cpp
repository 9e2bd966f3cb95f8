#include <cmath>
#include <random>

#include "ropt/errors.hpp"
#include "ropt/manifolds.hpp"
#include "ropt/maxcut.hpp"

namespace ropt::maxcut {
namespace {

constexpr double kCriticalGradNorm = 1e-6;

void check_laplacian(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols() || L.rows() < 1) {
    throw DimensionError("expected a nonempty square Laplacian");
  }
}

}  // namespace

CutProblem build_problem(const Eigen::MatrixXd& L, Eigen::Index r,
                         bool share_product) {
  check_laplacian(L);
  CutProblem out;
  out.counts = std::make_shared<ProductCounts>();
  out.problem.manifold = elliptope_factory(L.rows(), r);

  auto counts = out.counts;
  auto LY = [L, counts, share_product](const Point& Y,
                                       CacheEntry& entry) -> Eigen::MatrixXd {
    auto compute = [&] {
      ++counts->point_products;
      return Eigen::MatrixXd(L * Y.matrix());
    };
    if (!share_product) return compute();
    return entry.get_or_compute<Eigen::MatrixXd>("LY", compute);
  };

  out.problem.set_cost([LY](const Point& Y, CacheEntry& entry) {
    return -Y.matrix().cwiseProduct(LY(Y, entry)).sum() / 4.0;
  });
  out.problem.set_egrad([LY](const Point& Y, CacheEntry& entry) -> Ambient {
    return Eigen::MatrixXd(-0.5 * LY(Y, entry));
  });
  out.problem.set_ehess(
      [L, counts](const Point&, const Tangent& U, CacheEntry&) -> Ambient {
        ++counts->tangent_products;
        return Eigen::MatrixXd(-0.5 * (L * U.matrix()));
      });
  return out;
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "tr") return SolverKind::kTrustRegions;
  if (name == "cg") return SolverKind::kConjugateGradient;
  if (name == "sd") return SolverKind::kSteepestDescent;
  throw ArgumentError("unknown solver '" + name + "' (expected tr, cg or sd)");
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kTrustRegions:
      return "tr";
    case SolverKind::kConjugateGradient:
      return "cg";
    case SolverKind::kSteepestDescent:
      return "sd";
  }
  return "?";
}

RankSolve solve_rank_r(const Eigen::MatrixXd& L, Eigen::Index r,
                       const SolverOptions& opts, Rng& rng, SolverKind kind,
                       std::optional<Eigen::MatrixXd> Y0) {
  const CutProblem cp = build_problem(L, r);
  const Manifold& M = *cp.problem.manifold;
  Point x0 = Y0 ? Point(std::move(*Y0)) : M.rand_point(rng);
  M.check_point(x0);

  RankSolve out;
  switch (kind) {
    case SolverKind::kTrustRegions:
      out.run = trust_regions(cp.problem, std::move(x0), opts);
      break;
    case SolverKind::kConjugateGradient:
      out.run = conjugate_gradient(cp.problem, std::move(x0), opts);
      break;
    case SolverKind::kSteepestDescent:
      out.run = steepest_descent(cp.problem, std::move(x0), opts);
      break;
  }
  out.Y = out.run.x_final.matrix();
  return out;
}

Rounding round_cut(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y,
                   int trials, Rng& rng) {
  check_laplacian(L);
  if (trials < 1) throw ArgumentError("round_cut: trials must be >= 1");
  if (Y.rows() != L.rows()) throw DimensionError("round_cut: Y has wrong rows");

  Rounding best;
  best.cut_value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd s(Y.rows());
  for (int k = 0; k < trials; ++k) {
    const Eigen::VectorXd z = gaussian_matrix(Y.cols(), 1, rng);
    const Eigen::VectorXd proj = Y * z;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      s(i) = proj(i) >= 0.0 ? 1.0 : -1.0;
    }
    const double value = cut_value(L, s);
    if (value > best.cut_value) {
      best.cut_value = value;
      best.s = s;
    }
  }
  return best;
}

Certificate certify(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y,
                    double tol) {
  check_laplacian(L);
  if (Y.rows() != L.rows()) throw DimensionError("certify: Y has wrong rows");
  if (!(tol >= 0.0)) throw ArgumentError("certify: tol must be >= 0");

  const Eigen::MatrixXd LY = L * Y;
  const Eigen::VectorXd d = LY.cwiseProduct(Y).rowwise().sum();

  // Rowwise tangent part of the Euclidean gradient -LY/2.
  const Eigen::MatrixXd rgrad = -0.5 * (LY - d.asDiagonal() * Y);
  const double gnorm = rgrad.norm();
  if (!(gnorm <= kCriticalGradNorm)) {
    throw PreconditionError("certify: Y is not critical (gradient norm " +
                            std::to_string(gnorm) + " > 1e-6)");
  }

  Eigen::MatrixXd S = -L;
  S.diagonal() += d;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  if (eig.info() != Eigen::Success) {
    throw Error("certify: eigendecomposition failed");
  }

  Certificate c;
  c.lambda_min = eig.eigenvalues()(0);
  c.eigenvector = eig.eigenvectors().col(0);
  c.residual = (S * Y).norm();
  const double scale = L.cwiseAbs().colwise().sum().maxCoeff();
  c.certified = c.lambda_min >= -tol * scale;
  if (c.certified) {
    const double n = static_cast<double>(L.rows());
    c.upper_bound = (d.sum() + n * std::max(-c.lambda_min, 0.0)) / 4.0;
  }
  return c;
}

}  // namespace ropt::maxcut
