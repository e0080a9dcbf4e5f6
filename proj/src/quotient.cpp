#include "qb/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qb/group_action.hpp"

namespace qb {

namespace {

/// Evaluates a fixed list of polynomials at many points through shared power tables.
class PolyBatch {
 public:
  explicit PolyBatch(const std::vector<MultiPoly>& polys) {
    for (const auto& p : polys) {
      dim_ = std::max(dim_, p.dim());
      max_exp_ = std::max(max_exp_, p.max_exponent());
      std::vector<std::pair<MultiIndex, cplx>> terms(p.terms().begin(), p.terms().end());
      polys_.push_back(std::move(terms));
    }
  }

  void evaluate(std::span<const cplx> w, std::span<cplx> out) const {
    const auto stride = static_cast<std::size_t>(max_exp_) + 1;
    std::vector<cplx> powers(dim_ * stride);
    for (std::size_t k = 0; k < dim_; ++k) {
      powers[k * stride] = 1.0;
      for (std::size_t e = 1; e < stride; ++e) powers[k * stride + e] = powers[k * stride + e - 1] * w[k];
    }
    for (std::size_t j = 0; j < polys_.size(); ++j) {
      cplx s{};
      for (const auto& [e, c] : polys_[j]) {
        cplx t = c;
        for (std::size_t k = 0; k < dim_; ++k)
          if (e[k] != 0) t *= powers[k * stride + static_cast<std::size_t>(e[k])];
        s += t;
      }
      out[j] = s;
    }
  }

 private:
  std::size_t dim_ = 0;
  int max_exp_ = 0;
  std::vector<std::vector<std::pair<MultiIndex, cplx>>> polys_;
};

double scale_of(const MultiPoly& f) { return std::max(1.0, f.max_abs_coeff()); }
double scale_of(const MixedSymbol& u) { return std::max(1.0, u.joint().max_abs_coeff()); }

void require_invariant(const ReflectionGroup& g, const MixedSymbol& u, const char* what) {
  if (u.dim() != g.dimension()) throw Error(ErrorCode::dimension, std::string(what) + " has the wrong dimension");
  if (invariance_residual(g, u) > kRelativeInvarianceTol * scale_of(u)) {
    throw Error(ErrorCode::invariance, std::string(what) + " is not G-invariant");
  }
}

MonomialNorms norms_for(const QuotientDescriptor& q) { return MonomialNorms(q.weight); }

}  // namespace

QuotientDescriptor QuotientDescriptor::make(const ReflectionGroup& g, const Character& chi, const Weight& w) {
  if (chi.degree != 1) throw Error(ErrorCode::unsupported, "quotients need a one-dimensional character");
  if (w.dim != g.dimension()) throw Error(ErrorCode::dimension, "weight and group dimensions differ");
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double radius = 0.9 / std::sqrt(static_cast<double>(w.dim));
  for (int k = 0; k < 20; ++k) {
    Point z(w.dim);
    for (auto& v : z) {
      cplx c(u(rng), u(rng));
      v = radius * c / std::max(1.0, std::abs(c));
    }
    const double base = w.density(z);
    for (std::size_t gi : g.generators()) {
      const double moved = w.density(g.element(gi).apply(z));
      if (std::abs(moved - base) > 1e-10 * std::max(1.0, base)) {
        throw Error(ErrorCode::invariance, "weight " + w.label() + " is not invariant under " + g.label());
      }
    }
  }
  QuotientDescriptor q{g, basic_map(g), chi, w, generating_polynomial(g, chi), MultiPoly()};
  q.jacobian = jacobian_det(q.theta);
  if (relative_invariance_residual(g, chi, q.ell) > kRelativeInvarianceTol * scale_of(q.ell)) {
    throw Error(ErrorCode::invariance, "generating polynomial is not relative invariant for '" + chi.label + "'");
  }
  return q;
}

double omega_rho_eval(const QuotientDescriptor& q, std::span<const cplx> z) {
  const cplx j = q.jacobian.evaluate(z);
  if (std::abs(j) < kBranchLocusTol) throw Error(ErrorCode::singular_point, "point lies on the branch locus");
  return std::norm(q.ell.evaluate(z)) / std::norm(j) * q.weight.density(z);
}

MultiPoly gamma_apply(const QuotientDescriptor& q, const MultiPoly& phi) {
  if (phi.dim() != q.theta.target_dim()) throw Error(ErrorCode::dimension, "phi has the wrong number of variables");
  return compose_map(phi, q.theta) * q.ell * (1.0 / std::sqrt(static_cast<double>(q.group.order())));
}

MultiPoly gamma_preimage(const QuotientDescriptor& q, const MultiPoly& f) {
  return invariant_to_theta(q.group, divide_by_generator(q.group, q.character, f)) *
         std::sqrt(static_cast<double>(q.group.order()));
}

QuotientBasis isotypic_basis(const QuotientDescriptor& q, int n) {
  const MonomialNorms norms = norms_for(q);
  InnerProduct ip = [&](const MultiPoly& a, const MultiPoly& b) { return inner_product(a, b, norms); };
  IsotypicComponent comp = isotypic_component(q.group, q.character, n, ip);
  QuotientBasis out;
  out.character = q.character;
  out.labels = std::move(comp.labels);
  out.vectors = std::move(comp.basis);
  out.degree_cap = n;
  for (const auto& b : out.vectors) out.preimages.push_back(gamma_preimage(q, b));
  return out;
}

TruncatedOperator compressed_toeplitz(const QuotientDescriptor& q, const QuotientBasis& basis, const MixedSymbol& u) {
  require_invariant(q.group, u, "compressed symbol");
  const MonomialNorms norms = norms_for(q);
  TruncatedOperator op;
  op.index_map = basis.labels;
  op.truncation = basis.degree_cap;
  op.band_margin = u.band_margin();
  for (const auto& b : basis.vectors) op.extent.push_back(b.max_exponent());
  const auto size = static_cast<Eigen::Index>(basis.size());
  op.matrix = CMatrix::Zero(size, size);
  for (Eigen::Index j = 0; j < size; ++j)
    for (Eigen::Index i = 0; i < size; ++i)
      op.matrix(i, j) = symbol_inner_product(u, basis.vectors[static_cast<std::size_t>(j)],
                                             basis.vectors[static_cast<std::size_t>(i)], norms);
  return op;
}

namespace {
/// Multiplier turning an integral against omega dV on Omega into the pullback
/// of an integral against omega_chi dV on theta(Omega).
double pullback_factor(const QuotientDescriptor& q, std::span<const cplx> z) {
  const double jac = std::norm(q.jacobian.evaluate(z));
  return omega_rho_eval(q, z) * jac / (static_cast<double>(q.group.order()) * q.weight.density(z));
}
}  // namespace

QuadratureResult pullback_integral(const QuotientDescriptor& q, const SampledFunction& f, QuadratureOrders orders) {
  SampledFunction integrand = [&](std::span<const cplx> z) {
    const Point w = q.theta.evaluate(z);
    return f(w) * pullback_factor(q, z);
  };
  return quadrature_integral(integrand, q.weight, orders);
}

TruncatedOperator quotient_toeplitz_quadrature(const QuotientDescriptor& q, const QuotientBasis& basis,
                                               const SampledFunction& u, QuadratureOrders orders) {
  const PolyBatch batch(basis.preimages);
  auto eval = [&](std::span<const cplx> z, std::span<cplx> out) {
    const Point w = q.theta.evaluate(z);
    batch.evaluate(w, out);
  };
  SampledFunction multiplier = [&](std::span<const cplx> z) {
    const Point w = q.theta.evaluate(z);
    return u(w) * pullback_factor(q, z);
  };
  TruncatedOperator op;
  op.index_map = basis.labels;
  op.truncation = basis.degree_cap;
  for (const auto& b : basis.vectors) op.extent.push_back(b.max_exponent());
  op.matrix = quadrature_gram(QuadratureRule(q.weight, orders), basis.size(), eval, multiplier);
  return op;
}

IsometryCheck gamma_isometry(const QuotientDescriptor& q, const MultiPoly& phi, const MultiPoly& psi,
                             QuadratureOrders orders) {
  const MonomialNorms norms = norms_for(q);
  IsometryCheck out;
  out.exact = inner_product(gamma_apply(q, phi), gamma_apply(q, psi), norms);
  out.quotient =
      pullback_integral(q, [&](std::span<const cplx> w) { return phi.evaluate(w) * std::conj(psi.evaluate(w)); }, orders)
          .value;
  return out;
}

KernelIdentity kernel_identity(const QuotientDescriptor& q, const QuotientBasis& basis, std::span<const cplx> z,
                               std::span<const cplx> y) {
  KernelIdentity out;
  for (const auto& b : basis.vectors) out.basis_sum += b.evaluate(z) * std::conj(b.evaluate(y));
  const Point tz = q.theta.evaluate(z), ty = q.theta.evaluate(y);
  cplx quotient_kernel{};
  for (const auto& phi : basis.preimages) quotient_kernel += phi.evaluate(tz) * std::conj(phi.evaluate(ty));
  const cplx rhs = q.ell.evaluate(z) * quotient_kernel * std::conj(q.ell.evaluate(y)) /
                   static_cast<double>(q.group.order());
  out.finite_sum_residual = std::abs(out.basis_sum - rhs);
  cplx closed{};
  for (std::size_t i = 0; i < q.group.order(); ++i) {
    const Point moved = q.group.element(q.group.inverse_index(i)).apply(z);
    closed += q.character(i) * kernel_eval(q.weight, moved, y);
  }
  closed /= static_cast<double>(q.group.order());
  out.closed_form_residual = std::abs(out.basis_sum - closed);
  return out;
}

double reducing_subspace_defect(const ReflectionGroup& g, const Weight& w, const MixedSymbol& u, int n) {
  require_invariant(g, u, "symbol");
  const TruncatedOperator full = toeplitz_matrix(u, w, n);
  std::map<MultiIndex, Eigen::Index> row;
  for (std::size_t i = 0; i < full.size(); ++i) row.emplace(full.index_map[i], static_cast<Eigen::Index>(i));
  const MonomialNorms norms(w);
  std::vector<CVector> columns;
  std::vector<int> block;
  int b = 0;
  for (const auto& chi : one_dim_characters(g)) {
    const auto q = QuotientDescriptor::make(g, chi, w);
    for (const auto& v : isotypic_basis(q, n).vectors) {
      CVector c = CVector::Zero(static_cast<Eigen::Index>(full.size()));
      for (const auto& [e, coeff] : v.terms()) c(row.at(e)) = coeff * norms.norm(e);
      columns.push_back(std::move(c));
      block.push_back(b);
    }
    ++b;
  }
  CMatrix wmat(static_cast<Eigen::Index>(full.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) wmat.col(static_cast<Eigen::Index>(j)) = columns[j];
  const CMatrix m = wmat.adjoint() * full.matrix * wmat;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (block[static_cast<std::size_t>(i)] != block[static_cast<std::size_t>(j)]) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

nlohmann::json TransferReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["group"] = group;
  j["mode"] = mode;
  j["truncation"] = truncation;
  j["characters"] = nlohmann::json::array();
  for (const auto& c : characters) j["characters"].push_back({{"label", c.label}, {"residual", c.residual}, {"pass", c.pass}});
  j["full_space"] = {{"residual", full_space.residual}, {"pass", full_space.pass}};
  j["joint_consistent"] = joint_consistent;
  return j;
}

namespace {
double identity_residual(const TruncatedOperator& a, const TruncatedOperator& b, const TruncatedOperator* target,
                         int margin) {
  const TruncatedOperator ab = op_product_interior(a, b, margin);
  if (target) return residual(ab.matrix, interior_block(*target, margin).matrix).max_abs;
  return residual(ab.matrix, op_product_interior(b, a, margin).matrix).max_abs;
}
}  // namespace

TransferReport transfer_check(const ReflectionGroup& g, const Weight& w, const MixedSymbol& u, const MixedSymbol& v,
                              const MixedSymbol& qsym, TransferMode mode, int n, double tol) {
  const PolyMap theta = basic_map(g);
  const MixedSymbol ut = compose_map(u, theta), vt = compose_map(v, theta);
  const MixedSymbol qt = mode == TransferMode::product ? compose_map(qsym, theta) : MixedSymbol(g.dimension());
  require_invariant(g, ut, "lifted u");
  require_invariant(g, vt, "lifted v");
  if (mode == TransferMode::product) require_invariant(g, qt, "lifted q");
  const int margin = ut.band_margin() + vt.band_margin();

  TransferReport rep;
  rep.experiment = mode == TransferMode::product ? "transfer-product" : "transfer-commutator";
  rep.group = g.label();
  rep.mode = mode == TransferMode::product ? "product" : "commutator";
  rep.truncation = n;
  for (const auto& chi : one_dim_characters(g)) {
    const auto q = QuotientDescriptor::make(g, chi, w);
    const auto basis = isotypic_basis(q, n);
    const auto cu = compressed_toeplitz(q, basis, ut), cv = compressed_toeplitz(q, basis, vt);
    double r = 0.0;
    if (mode == TransferMode::product) {
      const auto cq = compressed_toeplitz(q, basis, qt);
      r = identity_residual(cu, cv, &cq, margin);
    } else {
      r = identity_residual(cu, cv, nullptr, margin);
    }
    rep.characters.push_back({chi.label, r, r < tol});
  }
  const auto tu = toeplitz_matrix(ut, w, n), tv = toeplitz_matrix(vt, w, n);
  double r = 0.0;
  if (mode == TransferMode::product) {
    const auto tq = toeplitz_matrix(qt, w, n);
    r = identity_residual(tu, tv, &tq, margin);
  } else {
    r = identity_residual(tu, tv, nullptr, margin);
  }
  rep.full_space = {"full", r, r < tol};
  rep.joint_consistent = std::all_of(rep.characters.begin(), rep.characters.end(),
                                     [&](const CharacterResidual& c) { return c.pass == rep.full_space.pass; });
  return rep;
}

nlohmann::json LemmaPrReport::to_json() const {
  nlohmann::json j;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json z = nlohmann::json::array();
    for (auto v : p.z) z.push_back({v.real(), v.imag()});
    j["points"].push_back({{"z", z}, {"residual", p.residual}, {"warning", p.warning}});
  }
  j["berezin_residual"] = berezin_residual;
  j["operator_residual"] = operator_residual;
  return j;
}

LemmaPrReport lemma_pr_residual(const MultiPoly& f1, const MultiPoly& f2, const MultiPoly& g1, const MultiPoly& g2,
                                const MixedSymbol& h, const Weight& w, const std::vector<Point>& points, int n,
                                QuadratureOrders orders) {
  const MixedSymbol f = MixedSymbol::holomorphic(f1) + MixedSymbol::antiholomorphic(f2);
  const MixedSymbol g = MixedSymbol::holomorphic(g1) + MixedSymbol::antiholomorphic(g2);
  const MixedSymbol inner = h - MixedSymbol::antiholomorphic(f2) * MixedSymbol::holomorphic(g1);
  LemmaPrReport rep;
  for (const auto& z : points) {
    const cplx lhs = f1.evaluate(z) * g1.evaluate(z) + std::conj(f2.evaluate(z) * g2.evaluate(z)) +
                     f1.evaluate(z) * std::conj(g2.evaluate(z));
    const QuadratureResult b = berezin(w, inner, z, orders);
    LemmaPrPoint p{z, std::abs(lhs - b.value), b.warning};
    rep.berezin_residual = std::max(rep.berezin_residual, p.residual);
    rep.points.push_back(std::move(p));
  }
  const auto tf = toeplitz_matrix(f, w, n), tg = toeplitz_matrix(g, w, n), th = toeplitz_matrix(h, w, n);
  const int margin = tf.band_margin + tg.band_margin;
  rep.operator_residual = residual(op_product_interior(tf, tg, margin).matrix, interior_block(th, margin).matrix).max_abs;
  return rep;
}

MixedSymbol pluriharmonic_lift(const MixedSymbol& u, const QuotientDescriptor& q) {
  for (const auto& t : u.term_list()) {
    if (!t.a.is_zero() && !t.b.is_zero()) {
      throw Error(ErrorCode::not_pluriharmonic, "symbol has the mixed term " + u.to_string());
    }
  }
  MixedSymbol lifted = compose_map(u, q.theta);
  if (!lifted.is_pluriharmonic()) throw Error(ErrorCode::internal, "lift is not pluriharmonic");
  if (invariance_residual(q.group, lifted) > kRelativeInvarianceTol * scale_of(lifted)) {
    throw Error(ErrorCode::internal, "lift is not G-invariant");
  }
  return lifted;
}

VolumeCheck quotient_volume(const QuotientDescriptor& q, QuadratureOrders orders) {
  VolumeCheck out;
  out.quadrature = pullback_integral(q, [](std::span<const cplx>) { return cplx{1.0}; }, orders).value.real();
  const MonomialNorms norms = norms_for(q);
  out.exact = inner_product(q.ell, q.ell, norms).real() / static_cast<double>(q.group.order());
  return out;
}

}  // namespace qb
