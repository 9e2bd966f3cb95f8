#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ropt/linalg.hpp"
#include "ropt/problem.hpp"
#include "ropt/solvers.hpp"

namespace ropt::maxcut {

/// Undirected edge with 0-based endpoints, i < j.
struct Edge {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  double w = 1.0;
};

struct Graph {
  Eigen::Index n = 0;
  std::vector<Edge> edges;  // sorted by (i, j), no duplicates

  Eigen::MatrixXd adjacency() const;
};

/// Edge-list reader. Lines hold `i j [w]` with 1-based indices; `#` starts a
/// comment. An optional `p <n> <m>` line fixes the node count, otherwise it
/// is the largest index seen. Repeated edges are summed.
Graph parse_graph(std::istream& in);
Graph load_graph(const std::string& path);

/// L = D - W.
Eigen::MatrixXd laplacian(const Graph& g);

/// Products of L with the point (L*Y) and with tangents (L*U).
struct ProductCounts {
  std::size_t point_products = 0;
  std::size_t tangent_products = 0;
};

struct CutProblem {
  ProblemDef problem;
  std::shared_ptr<ProductCounts> counts;
};

/// min -trace(Y'LY)/4 over n x r matrices with unit-norm rows. With
/// share_product, L*Y is stored in the point's cache entry and reused
/// between cost and gradient.
CutProblem build_problem(const Eigen::MatrixXd& L, Eigen::Index r,
                         bool share_product = true);

enum class SolverKind { kTrustRegions, kConjugateGradient, kSteepestDescent };

SolverKind parse_solver_kind(const std::string& name);  // "tr", "cg", "sd"
std::string to_string(SolverKind kind);

struct RankSolve {
  Eigen::MatrixXd Y;
  RunResult run;
};

/// Solves the rank-r relaxation from Y0, or from a random point drawn from
/// rng when Y0 is empty.
RankSolve solve_rank_r(const Eigen::MatrixXd& L, Eigen::Index r,
                       const SolverOptions& opts, Rng& rng,
                       SolverKind kind = SolverKind::kTrustRegions,
                       std::optional<Eigen::MatrixXd> Y0 = std::nullopt);

/// s'Ls/4.
double cut_value(const Eigen::MatrixXd& L, const Eigen::VectorXd& s);
/// Sum of w over edges whose endpoints have different signs.
double cut_weight(const Graph& g, const Eigen::VectorXd& s);

struct Rounding {
  Eigen::VectorXd s;
  double cut_value = 0.0;
};

/// Best of `trials` random hyperplane roundings s = sign(Y z), z standard
/// Gaussian, with sign(0) = +1.
Rounding round_cut(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y,
                   int trials, Rng& rng);

struct Certificate {
  bool certified = false;
  double lambda_min = 0.0;
  Eigen::VectorXd eigenvector;  // unit, for lambda_min
  /// Dual value when certified: trace(L Y Y')/4 plus a correction
  /// n * max(-lambda_min, 0)/4 that keeps it a valid bound under the
  /// tolerance.
  std::optional<double> upper_bound;
  double residual = 0.0;  // ||S Y||_F
};

/// Dual certificate S = Diag(d) - L with d_i = (L Y Y')_ii. Certified when
/// lambda_min(S) >= -tol * ||L||_1. Throws PreconditionError when the
/// Riemannian gradient norm at Y exceeds 1e-6.
Certificate certify(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y,
                    double tol = 1e-6);

struct CutOptions {
  int trials = 100;
  double tol = 1e-6;
  SolverKind solver = SolverKind::kTrustRegions;
  SolverOptions solver_options = default_solver_options();

  static SolverOptions default_solver_options();
};

struct RankRecord {
  Eigen::Index rank = 0;
  double cost = 0.0;
  double grad_norm = 0.0;
  std::optional<Certificate> certificate;  // empty if Y was not critical
  double best_cut = 0.0;                   // best rounding at this rank
  bool descent_from_eigenvector = false;   // how the next rank was started
  RunResult run;
};

struct CutResult {
  Eigen::VectorXd s;
  double cut_value = 0.0;
  std::optional<double> upper_bound;
  bool certified = false;
  Eigen::Index rank_used = 0;
  Eigen::MatrixXd Y;
  std::vector<RankRecord> ranks;

  std::size_t iterations() const;
  double elapsed_seconds() const;
  /// Histories of all ranks, one after the other.
  std::vector<IterationRecord> history() const;
};

/// Single rank: solve, round, and certify when the solution is critical.
CutResult solve_cut(const Eigen::MatrixXd& L, Eigen::Index r,
                    const CutOptions& opts, Rng& rng);

/// Solves at increasing rank from r0 until the certificate holds or r = n,
/// starting each rank from the previous solution moved along the
/// certificate's most negative eigenvector.
CutResult rank_escalation(const Eigen::MatrixXd& L, Eigen::Index r0,
                          const CutOptions& opts, Rng& rng);

}  // namespace ropt::maxcut
