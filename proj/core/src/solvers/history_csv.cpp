#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "ropt/solvers.hpp"

namespace ropt {
namespace {

void put_real(std::ostream& os, double v) {
  if (!std::isnan(v)) os << v;
}

}  // namespace

void write_history_csv(const std::vector<IterationRecord>& history,
                       std::ostream& os) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  os << "iter,cost,gradnorm,time,stepsize,inner,Delta,rho\n";
  for (const auto& r : history) {
    os << r.iter << ',';
    put_real(os, r.cost);
    os << ',';
    put_real(os, r.grad_norm);
    os << ',';
    put_real(os, r.elapsed_seconds);
    os << ',';
    put_real(os, r.step_size);
    os << ',';
    if (r.inner_iterations >= 0) os << r.inner_iterations;
    os << ',';
    put_real(os, r.Delta);
    os << ',';
    put_real(os, r.rho);
    os << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

void write_history_csv(const std::vector<IterationRecord>& history,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open history file '" + path + "' for writing");
  write_history_csv(history, out);
  if (!out) throw Error("failed writing history file '" + path + "'");
}

}  // namespace ropt
