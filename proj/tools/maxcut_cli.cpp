#include "maxcut_cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ropt/diagnostics.hpp"
#include "ropt/errors.hpp"
#include "ropt/maxcut.hpp"

namespace ropt::maxcut {
namespace {

struct SolveArgs {
  std::string graph;
  Eigen::Index rank = 2;
  bool escalate = false;
  int trials = 100;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string solver = "tr";
  std::string out = "text";
  std::string history;
  bool timing = false;
};

struct CheckArgs {
  std::string graph;
  Eigen::Index rank = 2;
  std::uint64_t seed = 0;
  std::string slopes;
};

nlohmann::ordered_json to_json(const CutResult& res, Eigen::Index n,
                               std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["rank_used"] = res.rank_used;
  j["cost"] = res.ranks.empty() ? 0.0 : res.ranks.back().cost;
  j["cut"] = res.cut_value;
  j["bound"] = res.upper_bound ? nlohmann::ordered_json(*res.upper_bound)
                               : nlohmann::ordered_json(nullptr);
  j["certified"] = res.certified;
  j["seed"] = seed;
  j["iterations"] = res.iterations();
  j["time_seconds"] = res.elapsed_seconds();
  return j;
}

void print_text(std::ostream& out, const CutResult& res, Eigen::Index n,
                std::uint64_t seed) {
  out << std::setprecision(12);
  out << "n             " << n << "\n";
  out << "rank_used     " << res.rank_used << "\n";
  out << "cost          " << (res.ranks.empty() ? 0.0 : res.ranks.back().cost)
      << "\n";
  out << "cut           " << res.cut_value << "\n";
  out << "bound         ";
  if (res.upper_bound) {
    out << *res.upper_bound << "\n";
  } else {
    out << "none\n";
  }
  out << "certified     " << (res.certified ? "true" : "false") << "\n";
  out << "seed          " << seed << "\n";
  out << "iterations    " << res.iterations() << "\n";
  out << "time_seconds  " << res.elapsed_seconds() << "\n";
  out << "side          ";
  bool first = true;
  for (Eigen::Index i = 0; i < res.s.size(); ++i) {
    if (res.s(i) > 0) {
      out << (first ? "" : " ") << i + 1;
      first = false;
    }
  }
  out << "\n";
  for (const auto& rec : res.ranks) {
    out << "  rank " << rec.rank << ": cost " << rec.cost << ", gradnorm "
        << rec.grad_norm << ", best cut " << rec.best_cut;
    if (rec.certificate) {
      out << ", lambda_min " << rec.certificate->lambda_min;
    } else {
      out << ", not critical";
    }
    out << ", " << to_string(rec.run.stop_reason) << "\n";
  }
}

int run_solve(const SolveArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.graph);
  const Eigen::MatrixXd L = laplacian(g);

  CutOptions opts;
  opts.trials = a.trials;
  opts.tol = a.tol;
  opts.solver = parse_solver_kind(a.solver);
  opts.solver_options.seed = a.seed;
  if (!a.timing) opts.solver_options.clock = [] { return 0.0; };

  Rng rng(a.seed);
  const CutResult res = a.escalate ? rank_escalation(L, a.rank, opts, rng)
                                   : solve_cut(L, a.rank, opts, rng);

  if (!a.history.empty()) write_history_csv(res.history(), a.history);
  if (a.out == "json") {
    out << to_json(res, g.n, a.seed).dump(2) << "\n";
  } else if (a.out == "csv") {
    write_history_csv(res.history(), out);
  } else {
    print_text(out, res, g.n, a.seed);
  }
  return a.escalate && !res.certified ? kExitUncertified : kExitOk;
}

int run_check(const CheckArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.graph);
  const CutProblem cp = build_problem(laplacian(g), a.rank);
  const SlopeReport grad =
      check_gradient(cp.problem, std::nullopt, std::nullopt, a.seed);
  const SlopeReport hess =
      check_hessian(cp.problem, std::nullopt, std::nullopt, a.seed);
  out << "gradient check\n" << grad.to_string();
  out << "hessian check\n" << hess.to_string();
  if (!a.slopes.empty()) {
    export_slope_csv(grad, a.slopes + "-gradient.csv");
    export_slope_csv(hess, a.slopes + "-hessian.csv");
  }
  return grad.pass && hess.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Max-cut through the low-rank elliptope relaxation", "maxcut"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "Solve, round and certify");
  solve->add_option("--graph", sa.graph, "Edge-list file")->required();
  solve->add_option("--rank", sa.rank, "Relaxation rank (initial rank with --escalate)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve->add_flag("--escalate", sa.escalate,
                  "Increase the rank until the solution is certified");
  solve->add_option("--trials", sa.trials, "Random roundings")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve->add_option("--tol", sa.tol, "Certificate tolerance, relative to ||L||_1")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  solve->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  solve->add_option("--solver", sa.solver, "Solver")
      ->check(CLI::IsMember({"tr", "cg", "sd"}))
      ->capture_default_str();
  solve->add_option("--out", sa.out, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  solve->add_option("--history", sa.history, "Write the iteration history CSV here");
  solve->add_flag("--timing", sa.timing,
                  "Record wall-clock times (outputs are no longer reproducible)");

  CheckArgs ca;
  CLI::App* check =
      app.add_subcommand("check", "Taylor checks of the relaxation's derivatives");
  check->add_option("--graph", ca.graph, "Edge-list file")->required();
  check->add_option("--rank", ca.rank, "Relaxation rank")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  check->add_option("--seed", ca.seed, "Random seed")->capture_default_str();
  check->add_option("--slopes", ca.slopes,
                    "Write PREFIX-gradient.csv and PREFIX-hessian.csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* ctx =
        app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    out << ctx->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* ctx =
        app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n\n" << ctx->help();
    return kExitInputError;
  }

  try {
    if (solve->parsed()) return run_solve(sa, out);
    return run_check(ca, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace ropt::maxcut
