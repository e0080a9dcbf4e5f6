#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qb/bergman.hpp"
#include "qb/isotypic.hpp"
#include "qb/quadrature.hpp"
#include "qb/reflection_group.hpp"

namespace qb {

/// Data defining A^2_{omega_chi}(theta(Omega)) for a one-dimensional chi.
struct QuotientDescriptor {
  ReflectionGroup group;
  PolyMap theta;
  Character character;
  Weight weight;
  MultiPoly ell;       // l_chi
  MultiPoly jacobian;  // J_theta

  /// Validates weight invariance (generators, 20 sample points) and the
  /// relative invariance of l_chi. Throws invariance / unsupported errors.
  static QuotientDescriptor make(const ReflectionGroup& g, const Character& chi, const Weight& w);
};

inline constexpr double kBranchLocusTol = 1e-12;

/// |l_chi(z)|^2 / |J(z)|^2 * omega(z), the quotient weight at theta(z).
/// Throws a singular-point error when |J(z)| < 1e-12.
double omega_rho_eval(const QuotientDescriptor& q, std::span<const cplx> z);

/// Gamma_chi phi = (phi o theta) l_chi / sqrt|G|.
MultiPoly gamma_apply(const QuotientDescriptor& q, const MultiPoly& phi);
/// Inverse of gamma_apply on the chi-isotypic polynomials.
MultiPoly gamma_preimage(const QuotientDescriptor& q, const MultiPoly& f);

struct QuotientBasis {
  Character character;
  std::vector<MultiIndex> labels;
  /// Orthonormal in A^2_omega(Omega), each divisible by l_chi.
  std::vector<MultiPoly> vectors;
  /// Gamma-preimages: orthonormal in A^2_{omega_chi}(theta(Omega)).
  std::vector<MultiPoly> preimages;
  int degree_cap = 0;

  std::size_t size() const { return vectors.size(); }
};

/// Orthonormal basis of the chi-isotypic polynomials with every exponent <= n.
QuotientBasis isotypic_basis(const QuotientDescriptor& q, int n);

/// Matrix <u b_j, b_i> of a G-invariant symbol on the basis, exact.
TruncatedOperator compressed_toeplitz(const QuotientDescriptor& q, const QuotientBasis& basis, const MixedSymbol& u);

/// (1/|G|) int_Omega F(theta z) omega_chi(theta z) |J(z)|^2 dV(z): the integral of
/// F against omega_chi dV over theta(Omega), by pullback quadrature.
QuadratureResult pullback_integral(const QuotientDescriptor& q, const SampledFunction& f, QuadratureOrders orders);

inline constexpr QuadratureOrders kQuotientOrders{12, 32};

/// The compressed Toeplitz matrix computed on the quotient side: entries
/// <u phi_j, phi_i> in A^2_{omega_chi}(theta(Omega)) with phi_j the Gamma-preimages,
/// integrated by pullback quadrature. u is sampled on theta(Omega).
TruncatedOperator quotient_toeplitz_quadrature(const QuotientDescriptor& q, const QuotientBasis& basis,
                                               const SampledFunction& u, QuadratureOrders orders = kQuotientOrders);

/// <phi, psi> in A^2_omega_chi(theta(Omega)) by pullback quadrature, and
/// <Gamma phi, Gamma psi> in A^2_omega(Omega) from exact monomial norms.
struct IsometryCheck {
  cplx quotient;
  cplx exact;
  double defect() const { return std::abs(quotient - exact); }
};
IsometryCheck gamma_isometry(const QuotientDescriptor& q, const MultiPoly& phi, const MultiPoly& psi,
                             QuadratureOrders orders = kQuotientOrders);

struct KernelIdentity {
  /// |B^chi(z,y) - (1/|G|) l(z) K_chi(theta z, theta y) conj(l(y))| with both
  /// sides as finite sums over the truncated basis.
  double finite_sum_residual = 0.0;
  /// |B^chi(z,y) - (1/|G|) sum_sigma chi(sigma) K(sigma^{-1} z, y)|, closed form
  /// kernel on the right.
  double closed_form_residual = 0.0;
  cplx basis_sum{};
};
KernelIdentity kernel_identity(const QuotientDescriptor& q, const QuotientBasis& basis, std::span<const cplx> z,
                               std::span<const cplx> y);

/// Off-block max-abs of the full-space Toeplitz matrix of a G-invariant symbol
/// in the basis formed by the union of the one-dimensional isotypic bases.
double reducing_subspace_defect(const ReflectionGroup& g, const Weight& w, const MixedSymbol& u, int n);

enum class TransferMode { product, commutator };

struct CharacterResidual {
  std::string label;
  double residual = 0.0;
  bool pass = false;
};

struct TransferReport {
  std::string experiment;
  std::string group;
  std::string mode;
  int truncation = 0;
  std::vector<CharacterResidual> characters;
  CharacterResidual full_space;
  bool joint_consistent = false;

  nlohmann::json to_json() const;
};

inline constexpr double kTransferTol = 1e-9;

/// Lifts u, v (and q for product mode) through theta, then compares T_u T_v
/// with T_q (or T_v T_u) on interior blocks for every one-dimensional
/// character and on the full truncated monomial space.
TransferReport transfer_check(const ReflectionGroup& g, const Weight& w, const MixedSymbol& u, const MixedSymbol& v,
                              const MixedSymbol& qsym, TransferMode mode, int n, double tol = kTransferTol);

struct LemmaPrPoint {
  Point z;
  double residual = 0.0;
  bool warning = false;
};

struct LemmaPrReport {
  std::vector<LemmaPrPoint> points;
  double berezin_residual = 0.0;  // max over points
  double operator_residual = 0.0;  // interior max-abs of T_f T_g - T_h
  nlohmann::json to_json() const;
};

/// f = f1 + conj(f2), g = g1 + conj(g2) with holomorphic f_i, g_i.
LemmaPrReport lemma_pr_residual(const MultiPoly& f1, const MultiPoly& f2, const MultiPoly& g1, const MultiPoly& g2,
                                const MixedSymbol& h, const Weight& w, const std::vector<Point>& points, int n = 8,
                                QuadratureOrders orders = {});

/// p o theta + conj(r o theta) for u = p + conj(r). Throws not_pluriharmonic
/// when u has a term with both holomorphic and anti-holomorphic exponents.
MixedSymbol pluriharmonic_lift(const MixedSymbol& u, const QuotientDescriptor& q);

/// Volume of theta(Omega) for omega_chi: (1/|G|) int |l_chi|^2 omega dV, by
/// pullback quadrature and from exact monomial norms.
struct VolumeCheck {
  double quadrature = 0.0;
  double exact = 0.0;
};
VolumeCheck quotient_volume(const QuotientDescriptor& q, QuadratureOrders orders = kQuotientOrders);

}  // namespace qb
