#include <gtest/gtest.h>

#include "ropt/element.hpp"
#include "ropt/linalg.hpp"

namespace ropt {
namespace {

using Eigen::MatrixXd;

TEST(ThinQR, ReconstructsWithNonnegativeDiagonal) {
  Rng rng(1);
  const MatrixXd A = gaussian_matrix(7, 4, rng);
  const ThinQR qr = thin_qr(A);
  EXPECT_EQ(qr.Q.rows(), 7);
  EXPECT_EQ(qr.Q.cols(), 4);
  EXPECT_LE((qr.Q * qr.R - A).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LE((qr.Q.transpose() * qr.Q - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(),
            1e-13);
  for (int i = 0; i < 4; ++i) {
    EXPECT_GE(qr.R(i, i), 0.0);
    for (int j = 0; j < i; ++j) EXPECT_EQ(qr.R(i, j), 0.0);
  }
}

TEST(ThinQR, AgreesWithCholeskyOracle) {
  // R'R = A'A has a unique Cholesky factor with positive diagonal.
  Rng rng(2);
  const MatrixXd A = gaussian_matrix(6, 3, rng);
  const MatrixXd R = thin_qr(A).R;
  const MatrixXd Rc = (A.transpose() * A).llt().matrixU();
  EXPECT_LE((R - Rc).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Gaussian, DeterministicPerSeed) {
  Rng a(42), b(42);
  EXPECT_EQ(gaussian_matrix(3, 3, a), gaussian_matrix(3, 3, b));
}

TEST(SymSkew, SplitAMatrix) {
  Rng rng(3);
  const MatrixXd A = gaussian_matrix(4, 4, rng);
  EXPECT_LE((sym(A) + skew(A) - A).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(sym(A), sym(A).transpose());
  EXPECT_EQ(skew(A), -skew(A).transpose());
}

TEST(Element, MatrixArithmetic) {
  Tangent a(MatrixXd::Ones(2, 2));
  const Tangent b(MatrixXd::Identity(2, 2));
  axpy(2.0, b, a);
  EXPECT_EQ(a.matrix()(0, 0), 3.0);
  EXPECT_EQ(a.matrix()(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(dot(a, b), 6.0);
  scale(0.5, a);
  EXPECT_DOUBLE_EQ(max_abs(a), 1.5);
  EXPECT_TRUE(is_zero(zeros_like(a)));
  EXPECT_EQ((a - a).matrix(), MatrixXd::Zero(2, 2));
}

TEST(Element, ProductArithmetic) {
  Tangent a(std::vector<Tangent>{Tangent(MatrixXd::Ones(2, 1)),
                                 Tangent(MatrixXd::Ones(1, 1))});
  Tangent b = 3.0 * a;
  EXPECT_DOUBLE_EQ(dot(a, b), 9.0);
  EXPECT_TRUE(same_shape(a, b));
  EXPECT_FALSE(same_shape(a, Tangent(MatrixXd::Ones(3, 1))));
}

TEST(Element, WrongAlternativeThrows) {
  const Tangent a(MatrixXd::Ones(2, 2));
  EXPECT_THROW(a.low_rank(), DimensionError);
  EXPECT_THROW(a.components(), DimensionError);
  EXPECT_THROW(axpy(1.0, a, *std::make_unique<Tangent>(MatrixXd::Ones(3, 2))),
               DimensionError);
}

TEST(LowRankAmbient, FactoredDotMatchesDense) {
  Rng rng(5);
  const MatrixXd A1 = gaussian_matrix(5, 2, rng), B1 = gaussian_matrix(4, 2, rng);
  const MatrixXd A2 = gaussian_matrix(5, 1, rng), B2 = gaussian_matrix(4, 1, rng);
  LowRankAmbient x = LowRankAmbient::from_factors(A1, B1);
  x.dense_part = gaussian_matrix(5, 4, rng);
  const LowRankAmbient y = LowRankAmbient::from_factors(A2, B2);
  const double expected = x.dense().cwiseProduct(y.dense()).sum();
  EXPECT_NEAR(x.dot(y), expected, 1e-12);
  EXPECT_NEAR(ambient_dot(Ambient(x), Ambient(MatrixXd(y.dense()))), expected, 1e-12);

  const MatrixXd W = gaussian_matrix(4, 3, rng);
  EXPECT_LE((x.times(W) - x.dense() * W).cwiseAbs().maxCoeff(), 1e-12);
  const MatrixXd Z = gaussian_matrix(5, 3, rng);
  EXPECT_LE((x.transpose_times(Z) - x.dense().transpose() * Z).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(LowRankTangent, InnerProductIsComponentSum) {
  LowRankTangent u{MatrixXd::Ones(2, 2), MatrixXd::Ones(3, 2), MatrixXd::Ones(4, 2)};
  EXPECT_DOUBLE_EQ(u.dot(u), 4.0 + 6.0 + 8.0);
}

TEST(Errors, ParseErrorCarriesLine) {
  const ParseError e("bad thing", 7);
  EXPECT_EQ(e.line(), 7);
  EXPECT_STREQ(e.what(), "line 7: bad thing");
  const ParseError no_line("bad thing", 0);
  EXPECT_STREQ(no_line.what(), "bad thing");
}

}  // namespace
}  // namespace ropt
