#include "ropt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ropt {
namespace {

constexpr double kExactTol = 1e-12;
constexpr double kTangencyTol = 1e-8;
constexpr double kSymmetryTol = 1e-8;
constexpr double kLinearityTol = 1e-10;
constexpr int kSymmetryPairs = 10;

std::vector<double> log_spaced_steps() {
  std::vector<double> t(kSlopeSamples);
  for (std::size_t i = 0; i < kSlopeSamples; ++i) {
    t[i] = std::pow(10.0, -8.0 + 8.0 * static_cast<double>(i) /
                                     static_cast<double>(kSlopeSamples - 1));
  }
  return t;
}

struct Setup {
  Point x;
  Tangent u;
  double fx = 0.0;
  Tangent g;
};

Setup prepare(const ProblemDef& p, std::optional<Point> x,
              std::optional<Tangent> u, Rng& rng, CacheStore& store) {
  if (!p.manifold) throw ArgumentError("derivative check: no manifold");
  if (!has_gradient(p)) {
    throw MissingDerivativeError(
        "derivative check needs 'rgrad' or 'egrad'");
  }
  const Manifold& M = *p.manifold;
  Setup s;
  s.x = x ? std::move(*x) : M.rand_point(rng);
  s.u = u ? std::move(*u) : M.rand_tangent(s.x, rng);
  s.fx = get_cost(p, s.x, store);
  s.g = get_gradient(p, s.x, store);
  return s;
}

double tangency_residual(const Manifold& M, const Point& x, const Tangent& g) {
  const Tangent pg = M.proj(x, M.tangent_to_ambient(x, g));
  const Tangent diff = g - pg;
  return std::sqrt(dot(diff, diff)) / std::max(1.0, std::sqrt(dot(g, g)));
}

// Fills samples, fit, exact flag and slope verdict from remainder(t).
template <class Remainder>
void slope_test(SlopeReport& r, double fx, double lo, double hi,
                Remainder&& remainder) {
  r.cost_at_x = fx;
  r.accepted_slopes = {lo, hi};
  const double scale = std::max(1.0, std::abs(fx));
  r.exact = true;
  for (double t : log_spaced_steps()) {
    const double e = remainder(t);
    r.samples.push_back({t, e});
    if (!(e <= kExactTol * scale)) r.exact = false;
  }
  const SlopeFit fit =
      fit_slope_window(r.samples, kSlopeWindow, slope_noise_floor(fx));
  if (fit.found) {
    r.fitted_slope = fit.slope;
    r.window = {fit.t_low, fit.t_high};
  }
  r.slope_ok = r.exact || (fit.found && fit.slope >= lo && fit.slope <= hi);
}

}  // namespace

double slope_noise_floor(double cost_at_x) {
  return 100.0 * std::numeric_limits<double>::epsilon() *
         std::max(1.0, std::abs(cost_at_x));
}

SlopeFit fit_slope_window(const std::vector<SlopeSample>& samples,
                          std::size_t window, double noise_floor) {
  SlopeFit best;
  if (window < 2 || samples.size() < window) return best;
  for (std::size_t start = 0; start + window <= samples.size(); ++start) {
    bool usable = true;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
      const auto& s = samples[i];
      if (!(s.t > 0.0) || !(s.remainder > noise_floor) ||
          !std::isfinite(s.remainder)) {
        usable = false;
        break;
      }
      const double lx = std::log10(s.t);
      const double ly = std::log10(s.remainder);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    if (!usable) continue;
    const double n = static_cast<double>(window);
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) continue;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double res = 0.0;
    for (std::size_t i = start; i < start + window; ++i) {
      const double e = std::log10(samples[i].remainder) -
                       (intercept + slope * std::log10(samples[i].t));
      res += e * e;
    }
    if (res < best.residual) {
      best.found = true;
      best.slope = slope;
      best.residual = res;
      best.t_low = samples[start].t;
      best.t_high = samples[start + window - 1].t;
    }
  }
  return best;
}

SlopeReport check_gradient(const ProblemDef& p, std::optional<Point> x,
                           std::optional<Tangent> u, std::uint64_t seed) {
  Rng rng(seed);
  CacheStore store(false);
  const Setup s = prepare(p, std::move(x), std::move(u), rng, store);
  const Manifold& M = *p.manifold;
  const double slope0 = M.inner(s.x, s.g, s.u);

  SlopeReport r;
  slope_test(r, s.fx, 1.8, 2.2, [&](double t) {
    const double ft = get_cost(p, M.retract(s.x, s.u, t), store);
    return std::abs(ft - s.fx - t * slope0);
  });
  r.tangency_residual = tangency_residual(M, s.x, s.g);
  r.tangency_flagged = r.tangency_residual > kTangencyTol;
  r.pass = r.slope_ok && !r.tangency_flagged;
  return r;
}

SlopeReport check_hessian(const ProblemDef& p, std::optional<Point> x,
                          std::optional<Tangent> u, std::uint64_t seed) {
  Rng rng(seed);
  CacheStore store(false);
  const Setup s = prepare(p, std::move(x), std::move(u), rng, store);
  const Manifold& M = *p.manifold;

  SlopeReport r;
  if (hessian_source(p) == HessianSource::kFiniteDifference) {
    r.warnings.push_back(
        "no exact Hessian: checking the finite-difference approximation, "
        "which is not expected to pass");
  }
  const bool second_order = M.second_order_retraction();
  if (!second_order) {
    r.warnings.push_back(
        "retraction is not second order: expecting slope 2, Hessian "
        "validated by symmetry and linearity only");
  }

  const double slope0 = M.inner(s.x, s.g, s.u);
  const Tangent Hu = get_hessian(p, s.x, s.u, store);
  const double curv = M.inner(s.x, s.u, Hu);
  const double lo = second_order ? 2.7 : 1.8;
  const double hi = second_order ? 3.3 : 2.2;
  slope_test(r, s.fx, lo, hi, [&](double t) {
    const double ft = get_cost(p, M.retract(s.x, s.u, t), store);
    return std::abs(ft - s.fx - t * slope0 - 0.5 * t * t * curv);
  });
  r.tangency_residual = tangency_residual(M, s.x, s.g);
  r.tangency_flagged = r.tangency_residual > kTangencyTol;

  std::normal_distribution<double> normal;
  for (int i = 0; i < kSymmetryPairs; ++i) {
    const Tangent a = M.rand_tangent(s.x, rng);
    const Tangent b = M.rand_tangent(s.x, rng);
    const Tangent Ha = get_hessian(p, s.x, a, store);
    const Tangent Hb = get_hessian(p, s.x, b, store);
    const double hab = M.inner(s.x, Ha, b);
    const double ahb = M.inner(s.x, a, Hb);
    r.symmetry_residual = std::max(
        r.symmetry_residual, std::abs(hab - ahb) / std::max(1.0, std::abs(hab)));

    if (i == 0) {
      const double ca = normal(rng);
      const double cb = normal(rng);
      Tangent combo = ca * a + cb * b;
      const Tangent Hcombo = get_hessian(p, s.x, combo, store);
      const Tangent expected = ca * Ha + cb * Hb;
      const Tangent diff = Hcombo - expected;
      r.linearity_residual =
          M.norm(s.x, diff) / std::max(1.0, M.norm(s.x, expected));
    }
  }
  r.symmetry_flagged = r.symmetry_residual > kSymmetryTol;
  r.linearity_flagged = r.linearity_residual > kLinearityTol;
  r.pass = r.slope_ok && !r.tangency_flagged && !r.symmetry_flagged &&
           !r.linearity_flagged;
  return r;
}

std::string SlopeReport::to_string() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << (pass ? "PASS" : "FAIL") << ": slope " << fitted_slope
     << " (accepted [" << accepted_slopes.first << ", "
     << accepted_slopes.second << "]) over t in [" << window.first << ", "
     << window.second << "]";
  if (exact) os << ", remainder negligible at every t";
  os << "\n  tangency residual " << tangency_residual
     << (tangency_flagged ? " (FLAGGED)" : "");
  if (symmetry_residual > 0.0 || linearity_residual > 0.0 ||
      symmetry_flagged || linearity_flagged) {
    os << "\n  symmetry residual " << symmetry_residual
       << (symmetry_flagged ? " (FLAGGED)" : "") << ", linearity residual "
       << linearity_residual << (linearity_flagged ? " (FLAGGED)" : "");
  }
  for (const auto& w : warnings) os << "\n  warning: " << w;
  os << "\n";
  return os.str();
}

void export_slope_csv(const SlopeReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  out << "t,remainder\n";
  for (const auto& s : report.samples) out << s.t << ',' << s.remainder << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

std::vector<SlopeSample> read_slope_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "t,remainder") {
    throw ParseError("'" + path + "': missing t,remainder header", 1);
  }
  std::vector<SlopeSample> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("'" + path + "': expected two fields", lineno);
    }
    try {
      out.push_back({std::stod(line.substr(0, comma)),
                     std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ParseError("'" + path + "': bad number", lineno);
    }
  }
  return out;
}

}  // namespace ropt
