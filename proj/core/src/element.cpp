#include "ropt/element.hpp"

namespace ropt {

LowRankAmbient LowRankAmbient::from_factors(Eigen::MatrixXd A,
                                            Eigen::MatrixXd B) {
  if (A.cols() != B.cols()) {
    throw DimensionError("low-rank term: factor column counts differ");
  }
  LowRankAmbient z;
  z.rows = A.rows();
  z.cols = B.rows();
  z.terms.push_back({std::move(A), std::move(B)});
  return z;
}

Eigen::MatrixXd LowRankAmbient::times(const Eigen::MatrixXd& W) const {
  if (W.rows() != cols) throw DimensionError("low-rank times: bad operand");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, W.cols());
  if (has_dense()) out += dense_part * W;
  for (const auto& t : terms) out += t.A * (t.B.transpose() * W);
  return out;
}

Eigen::MatrixXd LowRankAmbient::transpose_times(
    const Eigen::MatrixXd& W) const {
  if (W.rows() != rows) {
    throw DimensionError("low-rank transpose_times: bad operand");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(cols, W.cols());
  if (has_dense()) out += dense_part.transpose() * W;
  for (const auto& t : terms) out += t.B * (t.A.transpose() * W);
  return out;
}

Eigen::MatrixXd LowRankAmbient::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  if (has_dense()) out += dense_part;
  for (const auto& t : terms) out += t.A * t.B.transpose();
  return out;
}

LowRankAmbient& LowRankAmbient::operator+=(const LowRankAmbient& o) {
  if (!same_shape(o)) throw DimensionError("low-rank sum: shape mismatch");
  if (o.has_dense()) {
    if (has_dense()) {
      dense_part += o.dense_part;
    } else {
      dense_part = o.dense_part;
    }
  }
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

LowRankAmbient& LowRankAmbient::operator*=(double a) {
  if (has_dense()) dense_part *= a;
  for (auto& t : terms) t.A *= a;
  return *this;
}

double LowRankAmbient::dot(const LowRankAmbient& o) const {
  if (!same_shape(o)) throw DimensionError("low-rank dot: shape mismatch");
  // <Z, A B'> = trace(A' Z B) is evaluated through the factored products.
  double acc = 0.0;
  if (o.has_dense()) {
    Eigen::MatrixXd self = dense();
    acc += self.cwiseProduct(o.dense_part).sum();
  }
  for (const auto& t : o.terms) {
    acc += t.A.cwiseProduct(times(t.B)).sum();
  }
  return acc;
}

double ambient_dot(const Ambient& a, const Ambient& b) {
  if (a.is_low_rank() && b.is_matrix()) {
    return a.low_rank().dense().cwiseProduct(b.matrix()).sum();
  }
  if (a.is_matrix() && b.is_low_rank()) return ambient_dot(b, a);
  if (a.is_product() && b.is_product()) {
    const auto& ca = a.components();
    const auto& cb = b.components();
    if (ca.size() != cb.size()) {
      throw DimensionError("ambient_dot: component count mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < ca.size(); ++i) acc += ambient_dot(ca[i], cb[i]);
    return acc;
  }
  return dot(a, b);
}

Eigen::MatrixXd to_dense(const Ambient& a) {
  if (a.is_matrix()) return a.matrix();
  if (a.is_low_rank()) return a.low_rank().dense();
  throw DimensionError("to_dense: product ambient has no single matrix form");
}

}  // namespace ropt
