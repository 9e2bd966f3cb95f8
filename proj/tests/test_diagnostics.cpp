#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ropt/diagnostics.hpp"
#include "ropt/linalg.hpp"
#include "ropt/manifolds.hpp"
#include "ropt/maxcut.hpp"
#include "test_problems.hpp"

namespace ropt {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::vector<SlopeSample> power_law(double c, double p) {
  std::vector<SlopeSample> s;
  for (std::size_t k = 0; k < kSlopeSamples; ++k) {
    const double t = std::pow(10.0, -8.0 + 8.0 * k / (kSlopeSamples - 1));
    s.push_back({t, c * std::pow(t, p)});
  }
  return s;
}

maxcut::CutProblem triangle(Eigen::Index r = 2) {
  std::istringstream in("1 2\n2 3\n1 3\n");
  return maxcut::build_problem(maxcut::laplacian(maxcut::parse_graph(in)), r);
}

// x'Bx on R^n with a nonsymmetric B.
ProblemDef nonsymmetric_form(const MatrixXd& B) {
  ProblemDef p;
  p.manifold = euclidean_factory(B.rows());
  p.set_cost([B](const Point& x) { return x.matrix().col(0).dot(B * x.matrix().col(0)); });
  p.set_egrad([B](const Point& x) -> Ambient {
    return MatrixXd((B + B.transpose()) * x.matrix());
  });
  p.set_ehess([B](const Point&, const Tangent& u) -> Ambient {
    return MatrixXd((B + B.transpose()) * u.matrix());
  });
  return p;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "ropt_diagnostics_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(SlopeFit, RecoversPowerLaws) {
  for (double p : {1.0, 2.0, 3.0}) {
    const SlopeFit fit = fit_slope_window(power_law(0.7, p));
    ASSERT_TRUE(fit.found);
    EXPECT_NEAR(fit.slope, p, 1e-6);
    EXPECT_LT(fit.t_low, fit.t_high);
  }
}

TEST(SlopeFit, SkipsNoiseFloor) {
  auto s = power_law(1.0, 2.0);
  for (auto& sample : s) sample.remainder = std::max(sample.remainder, 1e-14);
  const SlopeFit fit = fit_slope_window(s, kSlopeWindow, 1e-14);
  ASSERT_TRUE(fit.found);
  EXPECT_NEAR(fit.slope, 2.0, 1e-6);
  EXPECT_GT(fit.t_low, 1e-7);
}

TEST(SlopeFit, TooFewUsableSamples) {
  EXPECT_FALSE(fit_slope_window(power_law(1.0, 2.0), kSlopeWindow, 1e10).found);
  EXPECT_FALSE(fit_slope_window({}).found);
}

TEST(CheckGradient, MaxCutTriangle) {
  const auto cp = triangle();
  const SlopeReport r = check_gradient(cp.problem, std::nullopt, std::nullopt, 1);
  EXPECT_TRUE(r.pass) << r.to_string();
  EXPECT_NEAR(r.fitted_slope, 2.0, 0.2);
  EXPECT_EQ(r.samples.size(), kSlopeSamples);
  for (std::size_t k = 1; k < r.samples.size(); ++k) {
    EXPECT_LT(r.samples[k - 1].t, r.samples[k].t);
  }
  EXPECT_DOUBLE_EQ(r.samples.front().t, 1e-8);
  EXPECT_DOUBLE_EQ(r.samples.back().t, 1.0);
  EXPECT_LE(r.tangency_residual, 1e-8);
}

TEST(CheckGradient, ScaledGradientFails) {
  auto cp = triangle();
  const auto egrad = cp.problem.egrad;
  cp.problem.egrad = [egrad](const Point& x, CacheEntry& e) -> Ambient {
    Ambient g = egrad(x, e);
    scale(0.9, g);
    return g;
  };
  const SlopeReport r = check_gradient(cp.problem, std::nullopt, std::nullopt, 1);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.fitted_slope, 1.0, 0.2);
}

TEST(CheckGradient, RadialComponentIsFlagged) {
  Rng rng(2);
  const MatrixXd A = sym(gaussian_matrix(5, 5, rng));
  ProblemDef p;
  p.manifold = sphere_factory(5);
  p.set_cost([A](const Point& x) { return x.matrix().col(0).dot(A * x.matrix().col(0)); });
  p.set_rgrad([A](const Point& x) -> Tangent {
    const VectorXd v = x.matrix().col(0);
    const VectorXd g = 2.0 * (A * v - v.dot(A * v) * v);
    return MatrixXd(g + 0.5 * v);
  });
  const SlopeReport r = check_gradient(p, std::nullopt, std::nullopt, 2);
  EXPECT_TRUE(r.tangency_flagged);
  EXPECT_GT(r.tangency_residual, 1e-8);
  EXPECT_FALSE(r.pass);
}

TEST(CheckGradient, LinearCostTakesExactBranch) {
  const VectorXd c = VectorXd::LinSpaced(4, 1.0, 4.0);
  ProblemDef p;
  p.manifold = euclidean_factory(4);
  p.set_cost([c](const Point& x) { return c.dot(x.matrix().col(0)); });
  p.set_egrad([c](const Point&) -> Ambient { return MatrixXd(c); });
  const SlopeReport r = check_gradient(p, std::nullopt, std::nullopt, 3);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.pass);
}

TEST(CheckGradient, MissingGradient) {
  ProblemDef p;
  p.manifold = sphere_factory(3);
  p.set_cost([](const Point&) { return 0.0; });
  EXPECT_THROW(check_gradient(p), MissingDerivativeError);
}

TEST(CheckGradient, Deterministic) {
  const auto cp = triangle(3);
  const SlopeReport a = check_gradient(cp.problem, std::nullopt, std::nullopt, 9);
  const SlopeReport b = check_gradient(cp.problem, std::nullopt, std::nullopt, 9);
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    EXPECT_EQ(a.samples[k].remainder, b.samples[k].remainder);
  }
}

TEST(CheckHessian, MaxCutTriangle) {
  const auto cp = triangle();
  const SlopeReport r = check_hessian(cp.problem, std::nullopt, std::nullopt, 1);
  EXPECT_TRUE(r.pass) << r.to_string();
  EXPECT_NEAR(r.fitted_slope, 3.0, 0.3);
  EXPECT_LE(r.symmetry_residual, 1e-8);
  EXPECT_LE(r.linearity_residual, 1e-10);
}

TEST(CheckHessian, ZeroHessianOnQuadraticFails) {
  Rng rng(4);
  const MatrixXd B = gaussian_matrix(4, 4, rng);
  ProblemDef p = nonsymmetric_form(B);
  p.set_ehess([](const Point& x, const Tangent&) -> Ambient {
    return MatrixXd(MatrixXd::Zero(x.matrix().rows(), 1));
  });
  const SlopeReport r = check_hessian(p, std::nullopt, std::nullopt, 4);
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.fitted_slope, 2.0, 0.2);
}

TEST(CheckHessian, TransposedTermIsFlagged) {
  Rng rng(5);
  const MatrixXd B = gaussian_matrix(4, 4, rng);
  ProblemDef p = nonsymmetric_form(B);
  p.set_ehess([B](const Point&, const Tangent& u) -> Ambient {
    return MatrixXd(2.0 * B * u.matrix());
  });
  const SlopeReport r = check_hessian(p, std::nullopt, std::nullopt, 5);
  EXPECT_TRUE(r.symmetry_flagged);
  EXPECT_FALSE(r.pass);
}

TEST(CheckHessian, QuadraticTakesExactBranch) {
  Rng rng(6);
  const ProblemDef p = nonsymmetric_form(gaussian_matrix(4, 4, rng));
  const SlopeReport r = check_hessian(p, std::nullopt, std::nullopt, 6);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.symmetry_flagged);
}

TEST(CheckHessian, FiniteDifferencePathWarns) {
  Rng rng(7);
  const MatrixXd A = sym(gaussian_matrix(4, 4, rng));
  ProblemDef p;
  p.manifold = sphere_factory(4);
  p.set_cost([A](const Point& x) { return x.matrix().col(0).dot(A * x.matrix().col(0)); });
  p.set_egrad([A](const Point& x) -> Ambient { return MatrixXd(2.0 * A * x.matrix()); });
  const SlopeReport r = check_hessian(p, std::nullopt, std::nullopt, 7);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(CheckHessian, SlopeTwoExpectedForFirstOrderRetractions) {
  const auto M = stiefel_factory(5, 2);
  ASSERT_FALSE(M->second_order_retraction());
  const testing::ManifoldCase mc{"stiefel", M, M->dim(), false};
  const auto costs = testing::smooth_costs(mc, 8);
  const SlopeReport r = check_hessian(costs[0].problem, std::nullopt, std::nullopt, 8);
  EXPECT_EQ(r.accepted_slopes.first, 1.8);
  EXPECT_EQ(r.accepted_slopes.second, 2.2);
  EXPECT_TRUE(r.pass) << r.to_string();
}

TEST(Checks, CorrectDerivativesPassAcrossTheMatrix) {
  for (const auto& mc : testing::solver_cases()) {
    for (const auto& tc : testing::smooth_costs(mc, 10)) {
      for (std::uint64_t seed : {1u, 2u, 3u}) {
        const SlopeReport g = check_gradient(tc.problem, std::nullopt, std::nullopt, seed);
        EXPECT_TRUE(g.pass) << mc.label << " / " << tc.name << "\n" << g.to_string();
        const SlopeReport h = check_hessian(tc.problem, std::nullopt, std::nullopt, seed);
        if (hessian_source(tc.problem) == HessianSource::kFiniteDifference) {
          // No user Hessian to verify; the approximation is only reported.
          EXPECT_FALSE(h.warnings.empty());
          continue;
        }
        EXPECT_TRUE(h.pass) << mc.label << " / " << tc.name << "\n" << h.to_string();
      }
    }
  }
}

TEST(SlopeCsv, FullReport) {
  const auto cp = triangle();
  const SlopeReport r = check_gradient(cp.problem, std::nullopt, std::nullopt, 1);
  const auto path = scratch("full.csv");
  export_slope_csv(r, path.string());
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  std::getline(in, line);
  ++lines;
  EXPECT_EQ(line, "t,remainder");
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 52u);
}

TEST(SlopeCsv, EmptyReportIsHeaderOnly) {
  const auto path = scratch("empty.csv");
  export_slope_csv(SlopeReport{}, path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "t,remainder\n");
  EXPECT_TRUE(read_slope_csv(path.string()).empty());
}

TEST(SlopeCsv, RoundTripReproducesTheSlope) {
  const auto cp = triangle(3);
  for (const SlopeReport& r : {check_gradient(cp.problem, std::nullopt, std::nullopt, 2),
                               check_hessian(cp.problem, std::nullopt, std::nullopt, 2)}) {
    const auto path = scratch("roundtrip.csv");
    export_slope_csv(r, path.string());
    const auto samples = read_slope_csv(path.string());
    ASSERT_EQ(samples.size(), r.samples.size());
    const SlopeFit fit =
        fit_slope_window(samples, kSlopeWindow, slope_noise_floor(r.cost_at_x));
    ASSERT_TRUE(fit.found);
    EXPECT_NEAR(fit.slope, r.fitted_slope, 1e-12);
  }
}

TEST(SlopeCsv, IoErrorsCarryThePath) {
  try {
    export_slope_csv(SlopeReport{}, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
  const auto path = scratch("bad.csv");
  std::ofstream(path) << "t,remainder\n1e-3,abc\n";
  EXPECT_THROW(read_slope_csv(path.string()), ParseError);
}

TEST(SlopeReport, TextSummary) {
  const auto cp = triangle();
  const std::string s = check_gradient(cp.problem, std::nullopt, std::nullopt, 1).to_string();
  EXPECT_NE(s.find("PASS"), std::string::npos);
}

}  // namespace
}  // namespace ropt
