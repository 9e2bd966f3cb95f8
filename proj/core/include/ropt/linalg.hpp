#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace ropt {

/// Generator used by every randomized operation in the library.
using Rng = std::mt19937_64;

/// rows x cols matrix of independent standard normal draws.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                                Rng& rng);

inline Eigen::MatrixXd sym(const Eigen::MatrixXd& A) {
  return 0.5 * (A + A.transpose());
}

inline Eigen::MatrixXd skew(const Eigen::MatrixXd& A) {
  return 0.5 * (A - A.transpose());
}

struct ThinQR {
  Eigen::MatrixXd Q;  // rows x min(rows, cols)
  Eigen::MatrixXd R;  // min(rows, cols) x cols, upper triangular
};

/// Thin Householder QR with the sign convention diag(R) >= 0, so that the
/// factorization of a full-column-rank matrix is unique.
ThinQR thin_qr(const Eigen::MatrixXd& A);

/// Q factor of thin_qr.
Eigen::MatrixXd qf(const Eigen::MatrixXd& A);

}  // namespace ropt
