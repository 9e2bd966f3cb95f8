#include "ropt/linalg.hpp"

#include <algorithm>

namespace ropt {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd A(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) A(i, j) = normal(rng);
  }
  return A;
}

ThinQR thin_qr(const Eigen::MatrixXd& A) {
  const Eigen::Index m = A.rows();
  const Eigen::Index k = std::min(A.rows(), A.cols());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  ThinQR out;
  out.Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (out.R(i, i) < 0.0) {
      out.R.row(i) *= -1.0;
      out.Q.col(i) *= -1.0;
    }
  }
  return out;
}

Eigen::MatrixXd qf(const Eigen::MatrixXd& A) { return thin_qr(A).Q; }

}  // namespace ropt
