#pragma once

#include <functional>
#include <vector>

#include "qb/group_action.hpp"
#include "qb/polynomial.hpp"
#include "qb/reflection_group.hpp"

namespace qb {

/// Tolerances for relative invariance and division remainders (coefficientwise).
inline constexpr double kRelativeInvarianceTol = 1e-10;
inline constexpr double kDivisionTol = 1e-10;

// Convention: f is chi-relative invariant when f(sigma z) = chi(sigma) f(z),
// equivalently group_act(sigma^{-1}, f) = chi(sigma) f. With this convention
// l_chi = prod l_i^{c_i} generates the chi-relative invariants and the
// Jacobian of the basic map is relative invariant for the sign character.

/// Isotypic projection P_chi f = (deg chi / |G|) sum_sigma chi(sigma) sigma(f).
MultiPoly project(const ReflectionGroup& g, const Character& chi, const MultiPoly& f);
MixedSymbol project(const ReflectionGroup& g, const Character& chi, const MixedSymbol& u);

/// max_sigma max-abs coefficient of f(sigma .) - chi(sigma) f. One-dimensional chi.
double relative_invariance_residual(const ReflectionGroup& g, const Character& chi, const MultiPoly& f);

/// max over monomials of total degree <= n of |sum_rho P_rho m - m|_inf, using
/// the complete character table.
double completeness_defect(const ReflectionGroup& g, int n);

/// Quotient and remainder of multivariate division by a single polynomial,
/// reducing graded-lex leading terms.
struct DivisionResult {
  MultiPoly quotient;
  MultiPoly remainder;
};
DivisionResult divide(const MultiPoly& f, const MultiPoly& divisor);

/// f = l_chi * result for chi-relative invariant f; the result is G-invariant.
/// Throws a divisibility error when f is not chi-relative invariant.
MultiPoly divide_by_generator(const ReflectionGroup& g, const Character& chi, const MultiPoly& f);

/// The polynomial f_hat in d new variables with f = f_hat o theta, for
/// G-invariant f. Solved per weighted degree by least squares.
MultiPoly invariant_to_theta(const ReflectionGroup& g, const MultiPoly& f);

using InnerProduct = std::function<cplx(const MultiPoly&, const MultiPoly&)>;

struct IsotypicComponent {
  Character character;
  std::vector<MultiPoly> basis;
  /// Exponent tuple of the monomial whose projection produced each vector.
  std::vector<MultiIndex> labels;
  int degree_cap = 0;
};

/// Orthonormal basis of P_chi applied to the monomials with every exponent
/// <= n: modified Gram-Schmidt over the projected monomials, visiting degrees
/// in increasing order and lexicographically larger tuples first, so the
/// labels for S_d are the non-increasing (trivial) or strictly decreasing
/// (sign) tuples. The result is ordered by graded-lex label.
IsotypicComponent isotypic_component(const ReflectionGroup& g, const Character& chi, int n,
                                     const InnerProduct& inner);

/// Modified Gram-Schmidt of `candidate` against `basis`. Returns false (and
/// leaves basis untouched) when the candidate is dependent.
bool gram_schmidt_append(std::vector<MultiPoly>& basis, MultiPoly candidate, const InnerProduct& inner);

}  // namespace qb
