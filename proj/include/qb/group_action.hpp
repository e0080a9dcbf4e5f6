#pragma once

#include "qb/polynomial.hpp"
#include "qb/reflection_group.hpp"

namespace qb {

/// sigma(f)(z) = f(sigma^{-1} z). For mixed symbols the anti-holomorphic
/// variables are substituted with the conjugate matrix.
MultiPoly group_act(const GroupElement& sigma, const MultiPoly& f);
MixedSymbol group_act(const GroupElement& sigma, const MixedSymbol& u);

/// Basic polynomial map: elementary symmetric polynomials for S_d,
/// (z_1^{n_1}, ..., z_d^{n_d}) for diagonal cyclic groups.
PolyMap basic_map(const ReflectionGroup& g);

/// Degrees of the basic polynomials, in component order.
std::vector<int> basic_degrees(const ReflectionGroup& g);

/// Elementary symmetric polynomial e_k in d variables.
MultiPoly elementary_symmetric(std::size_t d, int k);

/// Dimension of the G-invariant homogeneous polynomials of degree n, as the
/// rank of the group-averaged degree-n monomials. n <= 20.
int invariant_dimension(const ReflectionGroup& g, int n);

/// Largest coefficient change max_sigma |sigma(f) - f| over the group.
double invariance_residual(const ReflectionGroup& g, const MultiPoly& f);
double invariance_residual(const ReflectionGroup& g, const MixedSymbol& u);

}  // namespace qb
