#include <algorithm>
#include <array>
#include <cmath>

#include "ropt/errors.hpp"
#include "ropt/manifolds.hpp"
#include "ropt/maxcut.hpp"

namespace ropt::maxcut {
namespace {

double relaxation_cost(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y) {
  return -Y.cwiseProduct(L * Y).sum() / 4.0;
}

// Best point among R(Y, t Z) for the trial steps, if any lowers the cost.
std::optional<Eigen::MatrixXd> descend_along(const Eigen::MatrixXd& L,
                                             const Manifold& M,
                                             const Eigen::MatrixXd& Y,
                                             const Eigen::MatrixXd& Z) {
  const double f0 = relaxation_cost(L, Y);
  for (double t : {1e-2, 1e-3, 1e-4}) {
    Eigen::MatrixXd Yt = M.retract(Point(Y), Tangent(Z), t).matrix();
    if (relaxation_cost(L, Yt) < f0) return Yt;
  }
  return std::nullopt;
}

// Embeds Y in rank r + 1 and moves it off the rank-r critical point.
Eigen::MatrixXd lift(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Y,
                     const std::optional<Certificate>& cert, Rng& rng,
                     bool& used_eigenvector) {
  const Eigen::Index n = Y.rows();
  const Eigen::Index r = Y.cols();
  const auto M = elliptope_factory(n, r + 1);

  Eigen::MatrixXd Yp = Eigen::MatrixXd::Zero(n, r + 1);
  Yp.leftCols(r) = Y;

  used_eigenvector = false;
  if (cert && cert->eigenvector.size() == n) {
    Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(n, r + 1);
    Z.col(r) = cert->eigenvector;
    if (auto next = descend_along(L, *M, Yp, Z)) {
      used_eigenvector = true;
      return *next;
    }
  }
  const Eigen::MatrixXd U = M->rand_tangent(Point(Yp), rng).matrix();
  if (auto next = descend_along(L, *M, Yp, U)) return *next;
  if (auto next = descend_along(L, *M, Yp, -U)) return *next;
  return Yp;
}

void record_rounding(CutResult& out, const Rounding& rounding) {
  if (out.s.size() == 0 || rounding.cut_value > out.cut_value) {
    out.s = rounding.s;
    out.cut_value = rounding.cut_value;
  }
}

CutResult run(const Eigen::MatrixXd& L, Eigen::Index r, bool escalate,
              const CutOptions& opts, Rng& rng) {
  const Eigen::Index n = L.rows();
  CutResult out;
  std::optional<Eigen::MatrixXd> start;
  for (;;) {
    RankSolve solve =
        solve_rank_r(L, r, opts.solver_options, rng, opts.solver, start);
    RankRecord rec;
    rec.rank = r;
    rec.cost = solve.run.cost_final;
    rec.grad_norm = solve.run.grad_norm_final;
    const Rounding rounding = round_cut(L, solve.Y, opts.trials, rng);
    rec.best_cut = rounding.cut_value;
    record_rounding(out, rounding);
    try {
      rec.certificate = certify(L, solve.Y, opts.tol);
    } catch (const PreconditionError&) {
    }
    rec.run = std::move(solve.run);
    out.rank_used = r;
    out.Y = solve.Y;

    const bool certified = rec.certificate && rec.certificate->certified;
    if (certified) {
      out.certified = true;
      out.upper_bound = rec.certificate->upper_bound;
    }
    if (certified || !escalate || r >= n) {
      out.ranks.push_back(std::move(rec));
      break;
    }
    bool used_eigenvector = false;
    start = lift(L, solve.Y, rec.certificate, rng, used_eigenvector);
    rec.descent_from_eigenvector = used_eigenvector;
    out.ranks.push_back(std::move(rec));
    ++r;
  }
  return out;
}

}  // namespace

SolverOptions CutOptions::default_solver_options() {
  SolverOptions o;
  o.tol_grad_norm = 1e-9;
  o.max_iter = 500;
  return o;
}

std::size_t CutResult::iterations() const {
  std::size_t total = 0;
  for (const auto& rec : ranks) {
    if (!rec.run.history.empty()) total += rec.run.history.back().iter;
  }
  return total;
}

double CutResult::elapsed_seconds() const {
  double total = 0.0;
  for (const auto& rec : ranks) {
    if (!rec.run.history.empty()) {
      total += rec.run.history.back().elapsed_seconds;
    }
  }
  return total;
}

std::vector<IterationRecord> CutResult::history() const {
  std::vector<IterationRecord> all;
  for (const auto& rec : ranks) {
    all.insert(all.end(), rec.run.history.begin(), rec.run.history.end());
  }
  return all;
}

CutResult solve_cut(const Eigen::MatrixXd& L, Eigen::Index r,
                    const CutOptions& opts, Rng& rng) {
  if (r < 1 || r > L.rows()) {
    throw ArgumentError("rank must be between 1 and the node count");
  }
  return run(L, r, false, opts, rng);
}

CutResult rank_escalation(const Eigen::MatrixXd& L, Eigen::Index r0,
                          const CutOptions& opts, Rng& rng) {
  if (r0 < 2) throw ArgumentError("rank_escalation: initial rank must be >= 2");
  if (L.rows() < 1) throw DimensionError("rank_escalation: empty graph");
  return run(L, std::min(r0, L.rows()), true, opts, rng);
}

}  // namespace ropt::maxcut
