#pragma once

#include <string>

#include "ropt/manifold.hpp"

namespace ropt::detail {

/// Common shape checks for manifolds whose points, tangents and ambient
/// vectors are all dense rows x cols matrices.
class DenseManifold : public Manifold {
 public:
  DenseManifold(Eigen::Index rows, Eigen::Index cols)
      : rows_(rows), cols_(cols) {}

  void check_point(const Point& x) const override {
    require(x.is_matrix() && x.matrix().rows() == rows_ &&
                x.matrix().cols() == cols_,
            "point");
  }
  void check_tangent(const Point& x, const Tangent& u) const override {
    check_point(x);
    require(u.is_matrix() && u.matrix().rows() == rows_ &&
                u.matrix().cols() == cols_,
            "tangent vector");
  }
  void check_ambient(const Point& x, const Ambient& z) const override {
    check_point(x);
    require(z.is_matrix() && z.matrix().rows() == rows_ &&
                z.matrix().cols() == cols_,
            "ambient vector");
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

 protected:
  void require(bool ok, const char* what) const {
    if (!ok) {
      throw DimensionError(name() + ": " + what + " must be a " +
                           std::to_string(rows_) + "x" +
                           std::to_string(cols_) + " matrix");
    }
  }

  Eigen::Index rows_;
  Eigen::Index cols_;
};

}  // namespace ropt::detail
