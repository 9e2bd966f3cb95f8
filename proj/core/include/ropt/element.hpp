#pragma once

// Value types for points, tangent vectors and ambient vectors.
//
// Every manifold in the library represents its elements as one of three
// shapes: a dense matrix, a low-rank factorization (fixed-rank manifold
// only), or a list of component elements (product manifolds). Element<Leaf>
// is that recursive sum type; Point, Tangent and Ambient instantiate it with
// different low-rank leaves.

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ropt/errors.hpp"

namespace ropt {

/// X = U * diag(s) * V' with U (m x k), V (n x k) orthonormal and s > 0
/// sorted in decreasing order.
struct LowRankPoint {
  Eigen::MatrixXd U;
  Eigen::VectorXd s;
  Eigen::MatrixXd V;

  Eigen::MatrixXd dense() const { return U * s.asDiagonal() * V.transpose(); }
};

/// Tangent vector at (U, s, V): U*M*V' + Up*V' + U*Vp' with U'Up = 0 and
/// V'Vp = 0.
struct LowRankTangent {
  Eigen::MatrixXd M;
  Eigen::MatrixXd Up;
  Eigen::MatrixXd Vp;

  LowRankTangent& operator+=(const LowRankTangent& o) {
    M += o.M;
    Up += o.Up;
    Vp += o.Vp;
    return *this;
  }
  LowRankTangent& operator*=(double a) {
    M *= a;
    Up *= a;
    Vp *= a;
    return *this;
  }
  double dot(const LowRankTangent& o) const {
    return M.cwiseProduct(o.M).sum() + Up.cwiseProduct(o.Up).sum() +
           Vp.cwiseProduct(o.Vp).sum();
  }
  bool same_shape(const LowRankTangent& o) const {
    return M.rows() == o.M.rows() && M.cols() == o.M.cols() &&
           Up.rows() == o.Up.rows() && Up.cols() == o.Up.cols() &&
           Vp.rows() == o.Vp.rows() && Vp.cols() == o.Vp.cols();
  }
};

/// Ambient m x n matrix stored as an optional dense part plus a sum of
/// low-rank terms A_i * B_i'. Either part may be absent.
struct LowRankAmbient {
  struct Term {
    Eigen::MatrixXd A;  // m x q
    Eigen::MatrixXd B;  // n x q
  };

  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::MatrixXd dense_part;  // empty or rows x cols
  std::vector<Term> terms;

  static LowRankAmbient from_factors(Eigen::MatrixXd A, Eigen::MatrixXd B);

  bool has_dense() const { return dense_part.size() > 0; }

  /// Z * W for W (cols x q), without forming Z.
  Eigen::MatrixXd times(const Eigen::MatrixXd& W) const;
  /// Z' * W for W (rows x q), without forming Z.
  Eigen::MatrixXd transpose_times(const Eigen::MatrixXd& W) const;
  Eigen::MatrixXd dense() const;

  LowRankAmbient& operator+=(const LowRankAmbient& o);
  LowRankAmbient& operator*=(double a);
  double dot(const LowRankAmbient& o) const;
  bool same_shape(const LowRankAmbient& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

template <class Leaf>
class Element {
 public:
  using Components = std::vector<Element>;

  Element() : data_(Eigen::MatrixXd()) {}
  Element(Eigen::MatrixXd m) : data_(std::move(m)) {}  // NOLINT
  Element(Leaf f) : data_(std::move(f)) {}             // NOLINT
  Element(Components c) : data_(std::move(c)) {}       // NOLINT

  bool is_matrix() const { return data_.index() == 0; }
  bool is_low_rank() const { return data_.index() == 1; }
  bool is_product() const { return data_.index() == 2; }

  const Eigen::MatrixXd& matrix() const { return get<0>("dense matrix"); }
  Eigen::MatrixXd& matrix() { return get<0>("dense matrix"); }
  const Leaf& low_rank() const { return get<1>("low-rank factors"); }
  Leaf& low_rank() { return get<1>("low-rank factors"); }
  const Components& components() const { return get<2>("component list"); }
  Components& components() { return get<2>("component list"); }

  const auto& variant() const { return data_; }

 private:
  template <std::size_t I>
  const auto& get(const char* what) const {
    if (data_.index() != I) {
      throw DimensionError(std::string("element does not hold a ") + what);
    }
    return std::get<I>(data_);
  }
  template <std::size_t I>
  auto& get(const char* what) {
    if (data_.index() != I) {
      throw DimensionError(std::string("element does not hold a ") + what);
    }
    return std::get<I>(data_);
  }

  std::variant<Eigen::MatrixXd, Leaf, Components> data_;
};

using Point = Element<LowRankPoint>;
using Tangent = Element<LowRankTangent>;
using Ambient = Element<LowRankAmbient>;

// Linear algebra on tangent and ambient vectors. Operands must have the same
// structure; mismatches raise DimensionError.

template <class Leaf>
bool same_shape(const Element<Leaf>& a, const Element<Leaf>& b) {
  if (a.variant().index() != b.variant().index()) return false;
  if (a.is_matrix()) {
    return a.matrix().rows() == b.matrix().rows() &&
           a.matrix().cols() == b.matrix().cols();
  }
  if (a.is_product()) {
    const auto& ca = a.components();
    const auto& cb = b.components();
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (!same_shape(ca[i], cb[i])) return false;
    }
    return true;
  }
  if constexpr (std::is_same_v<Leaf, LowRankPoint>) {
    const auto& fa = a.low_rank();
    const auto& fb = b.low_rank();
    return fa.U.rows() == fb.U.rows() && fa.V.rows() == fb.V.rows() &&
           fa.s.size() == fb.s.size();
  } else {
    return a.low_rank().same_shape(b.low_rank());
  }
}

/// y <- y + a * x
template <class Leaf>
void axpy(double a, const Element<Leaf>& x, Element<Leaf>& y) {
  if (!same_shape(x, y)) throw DimensionError("axpy: shape mismatch");
  if (y.is_matrix()) {
    y.matrix() += a * x.matrix();
  } else if (y.is_product()) {
    auto& cy = y.components();
    const auto& cx = x.components();
    for (std::size_t i = 0; i < cy.size(); ++i) axpy(a, cx[i], cy[i]);
  } else {
    Leaf scaled = x.low_rank();
    scaled *= a;
    y.low_rank() += scaled;
  }
}

template <class Leaf>
void scale(double a, Element<Leaf>& x) {
  if (x.is_matrix()) {
    x.matrix() *= a;
  } else if (x.is_product()) {
    for (auto& c : x.components()) scale(a, c);
  } else {
    x.low_rank() *= a;
  }
}

/// Frobenius inner product of the stored representations.
template <class Leaf>
double dot(const Element<Leaf>& a, const Element<Leaf>& b) {
  if (!same_shape(a, b)) throw DimensionError("dot: shape mismatch");
  if (a.is_matrix()) return a.matrix().cwiseProduct(b.matrix()).sum();
  if (a.is_product()) {
    double acc = 0.0;
    const auto& ca = a.components();
    const auto& cb = b.components();
    for (std::size_t i = 0; i < ca.size(); ++i) acc += dot(ca[i], cb[i]);
    return acc;
  }
  return a.low_rank().dot(b.low_rank());
}

/// Same structure as x, all entries zero.
template <class Leaf>
Element<Leaf> zeros_like(const Element<Leaf>& x) {
  Element<Leaf> z = x;
  scale(0.0, z);
  return z;
}

/// Largest absolute entry of the representation.
template <class Leaf>
double max_abs(const Element<Leaf>& x) {
  if (x.is_matrix()) {
    return x.matrix().size() == 0 ? 0.0 : x.matrix().cwiseAbs().maxCoeff();
  }
  if (x.is_product()) {
    double m = 0.0;
    for (const auto& c : x.components()) m = std::max(m, max_abs(c));
    return m;
  }
  if constexpr (std::is_same_v<Leaf, LowRankTangent>) {
    const auto& t = x.low_rank();
    double m = 0.0;
    for (const auto* a : {&t.M, &t.Up, &t.Vp}) {
      if (a->size() > 0) m = std::max(m, a->cwiseAbs().maxCoeff());
    }
    return m;
  } else {
    const Eigen::MatrixXd d = x.low_rank().dense();
    return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
  }
}

template <class Leaf>
bool is_zero(const Element<Leaf>& x) {
  return max_abs(x) == 0.0;
}

inline Tangent operator+(Tangent a, const Tangent& b) {
  axpy(1.0, b, a);
  return a;
}
inline Tangent operator-(Tangent a, const Tangent& b) {
  axpy(-1.0, b, a);
  return a;
}
inline Tangent operator*(double s, Tangent a) {
  scale(s, a);
  return a;
}
inline Tangent operator-(Tangent a) {
  scale(-1.0, a);
  return a;
}

inline Ambient operator+(Ambient a, const Ambient& b) {
  if (a.is_low_rank() && b.is_low_rank()) {
    a.low_rank() += b.low_rank();
    return a;
  }
  axpy(1.0, b, a);
  return a;
}
inline Ambient operator*(double s, Ambient a) {
  scale(s, a);
  return a;
}

/// Frobenius inner product on ambient vectors; a low-rank ambient may be
/// paired with a dense matrix of the same size.
double ambient_dot(const Ambient& a, const Ambient& b);

/// Ambient vector as a dense matrix (product: error). Low-rank parts are
/// expanded.
Eigen::MatrixXd to_dense(const Ambient& a);

}  // namespace ropt
