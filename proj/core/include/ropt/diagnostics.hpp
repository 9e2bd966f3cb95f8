#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ropt/problem.hpp"

namespace ropt {

struct SlopeSample {
  double t = 0.0;
  double remainder = 0.0;
};

/// Least-squares line through (log10 t, log10 remainder) over the best
/// contiguous window of samples.
struct SlopeFit {
  bool found = false;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double t_low = std::numeric_limits<double>::quiet_NaN();
  double t_high = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::infinity();
};

/// Outcome of a Taylor-remainder derivative check.
///
/// For a correct gradient, E(t) = |f(R(x, tu)) - f(x) - t<g, u>| decays like
/// t^2; for a correct Hessian the next term cancels too and E decays like
/// t^3 (with a second-order retraction).
struct SlopeReport {
  std::vector<SlopeSample> samples;  // sorted by t
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  std::pair<double, double> window{std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::quiet_NaN()};
  std::pair<double, double> accepted_slopes{0.0, 0.0};
  bool exact = false;  // remainder negligible at every t
  bool slope_ok = false;

  double cost_at_x = 0.0;
  double tangency_residual = 0.0;
  bool tangency_flagged = false;

  // Hessian checks only.
  double symmetry_residual = 0.0;
  bool symmetry_flagged = false;
  double linearity_residual = 0.0;
  bool linearity_flagged = false;

  bool pass = false;
  std::vector<std::string> warnings;

  std::string to_string() const;
};

inline constexpr std::size_t kSlopeSamples = 51;
inline constexpr std::size_t kSlopeWindow = 13;

/// Remainders at or below this level (relative to f(x)) are treated as
/// rounding noise by the window selection.
double slope_noise_floor(double cost_at_x);

/// Picks the contiguous run of `window` samples whose log-log line fit has
/// the smallest squared residual. Samples at or below `noise_floor` are not
/// eligible.
SlopeFit fit_slope_window(const std::vector<SlopeSample>& samples,
                          std::size_t window = kSlopeWindow,
                          double noise_floor = 0.0);

/// First-order Taylor check of the gradient along u at x. Random x and unit
/// u are drawn from seed when not given.
SlopeReport check_gradient(const ProblemDef& p,
                           std::optional<Point> x = std::nullopt,
                           std::optional<Tangent> u = std::nullopt,
                           std::uint64_t seed = 0);

/// Second-order Taylor check of the Hessian, plus symmetry and linearity
/// audits over random tangent pairs.
SlopeReport check_hessian(const ProblemDef& p,
                          std::optional<Point> x = std::nullopt,
                          std::optional<Tangent> u = std::nullopt,
                          std::uint64_t seed = 0);

/// Writes "t,remainder" and one row per sample with 17 significant digits.
void export_slope_csv(const SlopeReport& report, const std::string& path);

/// Reads a file written by export_slope_csv.
std::vector<SlopeSample> read_slope_csv(const std::string& path);

}  // namespace ropt
