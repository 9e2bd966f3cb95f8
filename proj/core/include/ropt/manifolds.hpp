#pragma once

// Factories for the supported search spaces. Each returns an immutable
// descriptor; invalid sizes raise ArgumentError.

#include <vector>

#include "ropt/manifold.hpp"

namespace ropt {

/// Unit sphere in R^n, points stored as n x 1 columns. dim = n - 1.
ManifoldDescriptor sphere_factory(Eigen::Index n);

/// n x m matrices with unit-norm columns. dim = (n - 1) m.
ManifoldDescriptor oblique_factory(Eigen::Index n, Eigen::Index m);

/// n x p matrices with orthonormal columns. dim = np - p(p + 1)/2.
ManifoldDescriptor stiefel_factory(Eigen::Index n, Eigen::Index p);

/// p-dimensional subspaces of R^n, stored as orthonormal n x p bases.
/// dim = p(n - p). Costs must satisfy f(XQ) = f(X) for orthogonal Q; this is
/// not checked.
ManifoldDescriptor grassmann_factory(Eigen::Index n, Eigen::Index p);

/// Rotation group SO(n) as a submanifold of n x n matrices.
/// dim = n(n - 1)/2.
ManifoldDescriptor rotations_factory(Eigen::Index n);

/// m x n matrices of rank k with the embedded geometry. Points are
/// LowRankPoint triples, tangents LowRankTangent triples. There is no exact
/// Hessian conversion. dim = (m + n - k) k.
ManifoldDescriptor fixed_rank_factory(Eigen::Index m, Eigen::Index n,
                                      Eigen::Index k);

/// Factors Y (n x k) with unit-norm rows, so that YY' is a rank-k
/// correlation matrix. The right orthogonal symmetry is not quotiented out.
/// dim = n(k - 1).
ManifoldDescriptor elliptope_factory(Eigen::Index n, Eigen::Index k);

/// Factors Y (n x k) with unit Frobenius norm, so that YY' has unit trace.
/// dim = nk - 1.
ManifoldDescriptor spectrahedron_factory(Eigen::Index n, Eigen::Index k);

/// Plain rows x cols matrices.
ManifoldDescriptor euclidean_factory(Eigen::Index rows, Eigen::Index cols = 1);

/// Cartesian product; points and tangents are component lists.
ManifoldDescriptor product_factory(std::vector<ManifoldDescriptor> components);

}  // namespace ropt
