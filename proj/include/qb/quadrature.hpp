#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qb/bergman.hpp"

namespace qb {

struct QuadratureOrders {
  int radial = 64;
  int angular = 128;
  QuadratureOrders halved() const { return {std::max(1, radial / 2), std::max(1, angular / 2)}; }
};

/// Gauss rule on [0, 1] for the weight (1 - t)^a; a = 0 gives Gauss-Legendre.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_jacobi_unit(int n, double a);

/// Tensor rule for integrals against omega dV on the polydisc or the ball.
/// Polydisc: t = |z|^2 with Gauss-Jacobi in t, trapezoid in angle (coordinate k
/// shifted by k/d of an angular step). Ball: collapsed simplex coordinates.
/// Nodes are produced on demand from a flat index.
class QuadratureRule {
 public:
  QuadratureRule(const Weight& w, QuadratureOrders orders);
  const Weight& weight() const { return weight_; }
  std::size_t size() const { return size_; }
  /// Writes node `flat` into z and returns its weight.
  double node(std::size_t flat, std::span<cplx> z) const;

 private:
  Weight weight_;
  QuadratureOrders orders_;
  std::size_t size_ = 1;
  // polydisc: per coordinate (radial x angular) points and weights
  std::vector<std::vector<cplx>> points_;
  std::vector<std::vector<double>> point_weights_;
  // ball: Gauss-Legendre on [0,1] and the angle grid
  GaussRule legendre_;
  std::vector<cplx> phases_;
};

using SampledFunction = std::function<cplx(std::span<const cplx>)>;

struct QuadratureResult {
  cplx value{};
  /// |I(orders) - I(orders/2)|.
  double error_estimate = 0.0;
  bool warning = false;
};

inline constexpr double kQuadratureWarnTol = 1e-5;

/// Sum over nodes of f * weight, accumulated in fixed chunks then summed in
/// chunk order so the result does not depend on the thread count.
cplx quadrature_sum(const QuadratureRule& rule, const SampledFunction& f);

/// Integral of f against omega dV, with an error estimate from the half-order rule.
QuadratureResult quadrature_integral(const SampledFunction& f, const Weight& w, QuadratureOrders orders = {});

/// Berezin-type transform B_alpha f(z) on the polydisc.
QuadratureResult berezin(const Weight& w, const MixedSymbol& f, std::span<const cplx> z, QuadratureOrders orders = {});
QuadratureResult berezin(const Weight& w, const SampledFunction& f, std::span<const cplx> z,
                         QuadratureOrders orders = {});

/// phi_a(w)_j = (a_j - w_j) / (1 - conj(a_j) w_j).
Point moebius(std::span<const cplx> a, std::span<const cplx> w);
/// u o phi_a.
SampledFunction moebius_conjugate(SampledFunction u, Point a);
SampledFunction moebius_conjugate(const MixedSymbol& u, Point a);

/// Weighted composition (U_a f)(w) = f(phi_a(w)) prod_j ((1-|a_j|^2)^{1/2} / (1 - conj(a_j) w_j))^{alpha_j+2},
/// unitary on A^2_alpha(D^d) and an involution.
SampledFunction moebius_unitary(SampledFunction f, Point a, const Weight& w);

/// G_{ij} = sum over nodes of weight * m(z) * conj(f_i(z)) * f_j(z), where
/// basis(z, out) writes all f_j(z). Accumulated with chunked matrix products.
CMatrix quadrature_gram(const QuadratureRule& rule, std::size_t nbasis,
                        const std::function<void(std::span<const cplx>, std::span<cplx>)>& basis,
                        const SampledFunction& multiplier);

/// Toeplitz matrix of a sampled symbol in the orthonormal monomial basis of
/// the polydisc, by quadrature. Independent of the exact norm path except
/// for the basis normalization.
TruncatedOperator toeplitz_quadrature(const SampledFunction& u, const Weight& w, int n, QuadratureOrders orders,
                                      int band_margin = 0);

}  // namespace qb
