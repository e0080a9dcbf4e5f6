#pragma once

#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qb/common.hpp"
#include "qb/multi_index.hpp"
#include "qb/polynomial.hpp"

namespace qb {

enum class DomainKind { polydisc, ball };

/// Weight on D^d (omega_alpha = prod (alpha_i+1)(1-|z_i|^2)^alpha_i) or the
/// constant weight on B_d. Both are probability densities for the normalized
/// Lebesgue measure.
struct Weight {
  DomainKind domain = DomainKind::polydisc;
  std::size_t dim = 1;
  std::vector<double> alpha;  // polydisc only

  static Weight polydisc(std::vector<double> alpha);
  static Weight unweighted_polydisc(std::size_t d) { return polydisc(std::vector<double>(d, 0.0)); }
  static Weight ball(std::size_t d);

  bool integer_alpha() const;
  bool contains(std::span<const cplx> z) const;
  double density(std::span<const cplx> z) const;
  std::string label() const;
};

/// ||z^n||^2 in A^2_omega. Integer alpha (and the ball) go through exact
/// rational arithmetic with a single conversion; other alpha use log-Gamma.
double monomial_norm_sq(const MultiIndex& n, const Weight& w);

/// Memoized monomial norms for one weight. Thread-safe.
class MonomialNorms {
 public:
  explicit MonomialNorms(Weight w) : weight_(std::move(w)) {}
  const Weight& weight() const { return weight_; }
  double norm_sq(const MultiIndex& n) const;
  double norm(const MultiIndex& n) const;

 private:
  Weight weight_;
  mutable std::mutex mutex_;
  mutable std::map<MultiIndex, double> cache_;
};

/// <f, g> in A^2_omega from monomial orthogonality.
cplx inner_product(const MultiPoly& f, const MultiPoly& g, const MonomialNorms& norms);
/// <u f, g> in L^2_omega, exact.
cplx symbol_inner_product(const MixedSymbol& u, const MultiPoly& f, const MultiPoly& g,
                          const MonomialNorms& norms);

/// Closed-form reproducing kernel K(z, y); throws a domain error outside the domain.
cplx kernel_eval(const Weight& w, std::span<const cplx> z, std::span<const cplx> y);
/// Truncated series sum z^n conj(y)^n / ||z^n||^2 (box |n_i| <= n for the
/// polydisc, total degree <= n for the ball).
cplx kernel_series(const Weight& w, std::span<const cplx> z, std::span<const cplx> y, int n);
/// <p, K(., y)> from exact monomial norms; equals p(y) by the reproducing property.
cplx kernel_pairing(const MultiPoly& p, const Weight& w, std::span<const cplx> y);

/// Finite section of an operator in an orthonormal basis.
struct TruncatedOperator {
  CMatrix matrix;
  /// Monomial exponents (full space) or representative labels (isotypic basis).
  std::vector<MultiIndex> index_map;
  /// Largest single-variable exponent occurring in each basis vector.
  std::vector<int> extent;
  int truncation = 0;
  int band_margin = 0;

  std::size_t size() const { return index_map.size(); }
  std::vector<std::size_t> interior(int margin) const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// Toeplitz matrix of u on A^2_omega(D^d) in the orthonormal monomial basis
/// z^m/||z^m|| with every exponent <= n. Exact per entry.
TruncatedOperator toeplitz_matrix(const MixedSymbol& u, const Weight& w, int n);

/// Restriction to the indices with extent <= truncation - margin.
TruncatedOperator interior_block(const TruncatedOperator& a, int margin);

/// Product restricted to the interior block where it equals the true
/// operator composition. Throws a margin error when margin < band(A)+band(B).
TruncatedOperator op_product_interior(const TruncatedOperator& a, const TruncatedOperator& b, int margin);

struct ResidualNorms {
  double max_abs = 0.0;
  double frobenius = 0.0;
};
ResidualNorms residual(const CMatrix& a, const CMatrix& b);

/// || P(conj(g) K_y) - conj(g(y)) K_y || with K_y truncated at n, evaluated in
/// the orthonormal monomial basis (finite-section Toeplitz action).
double projection_identity_residual(const MultiPoly& g, const Weight& w, std::span<const cplx> y, int n);

}  // namespace qb
