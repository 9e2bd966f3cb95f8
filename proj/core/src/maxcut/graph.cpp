#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ropt/errors.hpp"
#include "ropt/maxcut.hpp"

namespace ropt::maxcut {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    if (end > pos) out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

bool parse_int(std::string_view s, long long& v) {
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), last, v);
  return ec == std::errc() && ptr == last;
}

bool parse_real(std::string_view s, double& v) {
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last && std::isfinite(v);
}

long long parse_index(std::string_view field, int lineno) {
  long long v = 0;
  if (!parse_int(field, v)) {
    throw ParseError("malformed node index '" + std::string(field) + "'",
                     lineno);
  }
  if (v <= 0) {
    throw ParseError("node index must be positive, got " + std::to_string(v),
                     lineno);
  }
  return v;
}

}  // namespace

Eigen::MatrixXd Graph::adjacency() const {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : edges) {
    W(e.i, e.j) += e.w;
    W(e.j, e.i) += e.w;
  }
  return W;
}

Graph parse_graph(std::istream& in) {
  std::map<std::pair<long long, long long>, double> weights;
  std::optional<long long> header_n;
  long long max_index = 0;
  int header_line = 0;

  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto f = split_fields(line);
    if (f.empty()) continue;

    if (f[0] == "p") {
      long long n = 0, m = 0;
      if (f.size() != 3 || !parse_int(f[1], n) || !parse_int(f[2], m) ||
          n < 0 || m < 0) {
        throw ParseError("malformed header, expected 'p <n> <m>'", lineno);
      }
      if (header_n) throw ParseError("second header line", lineno);
      header_n = n;
      header_line = lineno;
      continue;
    }
    if (f.size() < 2 || f.size() > 3) {
      throw ParseError("expected 'i j [w]', got " + std::to_string(f.size()) +
                           " fields",
                       lineno);
    }
    long long i = parse_index(f[0], lineno);
    long long j = parse_index(f[1], lineno);
    double w = 1.0;
    if (f.size() == 3 && !parse_real(f[2], w)) {
      throw ParseError("malformed weight '" + std::string(f[2]) + "'", lineno);
    }
    if (w < 0.0) {
      throw ParseError("negative weight " + std::string(f[2]), lineno);
    }
    if (i == j) {
      throw ParseError("self-loop at node " + std::to_string(i), lineno);
    }
    if (header_n && std::max(i, j) > *header_n) {
      throw ParseError("node index " + std::to_string(std::max(i, j)) +
                           " exceeds header node count " +
                           std::to_string(*header_n),
                       lineno);
    }
    if (i > j) std::swap(i, j);
    max_index = std::max(max_index, j);
    weights[{i, j}] += w;
  }
  if (in.bad()) throw Error("read error while parsing graph");
  if (header_n && max_index > *header_n) {
    throw ParseError("node index exceeds header node count", header_line);
  }

  Graph g;
  g.n = static_cast<Eigen::Index>(header_n.value_or(max_index));
  g.edges.reserve(weights.size());
  for (const auto& [ij, w] : weights) {
    g.edges.push_back({static_cast<Eigen::Index>(ij.first - 1),
                       static_cast<Eigen::Index>(ij.second - 1), w});
  }
  return g;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  try {
    return parse_graph(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

Eigen::MatrixXd laplacian(const Graph& g) {
  Eigen::MatrixXd L = -g.adjacency();
  for (Eigen::Index i = 0; i < g.n; ++i) {
    L(i, i) = -L.row(i).sum();
  }
  return L;
}

double cut_value(const Eigen::MatrixXd& L, const Eigen::VectorXd& s) {
  if (s.size() != L.rows()) throw DimensionError("cut_value: size mismatch");
  return s.dot(L * s) / 4.0;
}

double cut_weight(const Graph& g, const Eigen::VectorXd& s) {
  if (s.size() != g.n) throw DimensionError("cut_weight: size mismatch");
  double total = 0.0;
  for (const Edge& e : g.edges) {
    if ((s(e.i) >= 0.0) != (s(e.j) >= 0.0)) total += e.w;
  }
  return total;
}

}  // namespace ropt::maxcut
