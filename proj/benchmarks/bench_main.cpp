#include <benchmark/benchmark.h>

#include <sstream>

#include "ropt/linalg.hpp"
#include "ropt/manifolds.hpp"
#include "ropt/maxcut.hpp"
#include "ropt/solvers.hpp"

namespace {

using namespace ropt;
using Eigen::MatrixXd;

void retraction(benchmark::State& state, ManifoldDescriptor M) {
  Rng rng(1);
  const Point x = M->rand_point(rng);
  const Tangent u = M->rand_tangent(x, rng);
  for (auto _ : state) {
    Point y = M->retract(x, u, 0.1);
    benchmark::DoNotOptimize(y);
  }
}

BENCHMARK_CAPTURE(retraction, sphere_1000, sphere_factory(1000));
BENCHMARK_CAPTURE(retraction, stiefel_200x10, stiefel_factory(200, 10));
BENCHMARK_CAPTURE(retraction, rotations_20, rotations_factory(20));
BENCHMARK_CAPTURE(retraction, elliptope_500x5, elliptope_factory(500, 5));
BENCHMARK_CAPTURE(retraction, fixed_rank_100x80_k5, fixed_rank_factory(100, 80, 5));

ProblemDef rayleigh(const MatrixXd& A) {
  ProblemDef p;
  p.manifold = sphere_factory(A.rows());
  p.set_cost([A](const Point& x) { return -x.matrix().col(0).dot(A * x.matrix().col(0)); });
  p.set_egrad([A](const Point& x) -> Ambient { return MatrixXd(-2.0 * A * x.matrix()); });
  p.set_ehess([A](const Point&, const Tangent& u) -> Ambient {
    return MatrixXd(-2.0 * A * u.matrix());
  });
  return p;
}

void truncated_cg(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(2);
  const ProblemDef p = rayleigh(sym(gaussian_matrix(n, n, rng)));
  const Point x = p.manifold->rand_point(rng);
  CacheStore store;
  const PointKey key = store.new_key();
  const Tangent g = get_gradient(p, x, store, key);
  for (auto _ : state) {
    TcgResult r = tcg_subsolver(p, x, g, 1.0, 0.1, 1.0, 2 * n, store, key);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(truncated_cg)->Arg(50)->Arg(200);

void rayleigh_trust_regions(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(3);
  const ProblemDef p = rayleigh(sym(gaussian_matrix(n, n, rng)));
  SolverOptions o;
  o.clock = [] { return 0.0; };
  for (auto _ : state) {
    RunResult r = trust_regions(p, std::nullopt, o);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(rayleigh_trust_regions)->Arg(50)->Arg(200);

MatrixXd random_graph_laplacian(Eigen::Index n, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution edge(density);
  std::ostringstream text;
  text << "p " << n << " 0\n";
  for (Eigen::Index i = 1; i <= n; ++i) {
    for (Eigen::Index j = i + 1; j <= n; ++j) {
      if (edge(rng)) text << i << " " << j << "\n";
    }
  }
  std::istringstream in(text.str());
  return maxcut::laplacian(maxcut::parse_graph(in));
}

void maxcut_escalation(benchmark::State& state) {
  const MatrixXd L = random_graph_laplacian(state.range(0), 0.2, 4);
  maxcut::CutOptions o;
  o.solver_options.clock = [] { return 0.0; };
  for (auto _ : state) {
    Rng rng(5);
    maxcut::CutResult r = maxcut::rank_escalation(L, 2, o, rng);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(maxcut_escalation)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
