#pragma once

#include <vector>

#include <Eigen/Core>

#include "qb/reflection_group.hpp"

namespace qb {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// A = P * D * Q with P, Q unimodular and D = diag(d_1, ..., d_n), d_i > 0,
/// d_i | d_{i+1}.
struct SmithDecomposition {
  IntMatrix P;
  IntMatrix D;
  IntMatrix Q;
};

/// Throws a rank error for singular input.
SmithDecomposition smith_normal_form(const IntMatrix& A);

/// Exact determinant by fraction-free elimination (Bareiss).
long long int_determinant(const IntMatrix& A);
/// Classical adjugate, adj(A) * A = det(A) I.
IntMatrix adjugate(const IntMatrix& A);

struct MonomialPolyhedronGroup {
  ReflectionGroup group;
  std::vector<long long> deltas;
};

/// Finite abelian group attached to the monomial polyhedron {|z^{b^k}| < 1}:
/// the diagonal cyclic group with orders the Smith invariants of adj(B).
/// Unit invariants are kept so indices stay aligned with the coordinates.
MonomialPolyhedronGroup monomial_polyhedron_group(const IntMatrix& B);

}  // namespace qb
