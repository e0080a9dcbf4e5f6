#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qb/group_action.hpp"
#include "qb/quotient.hpp"

using namespace qb;

namespace {

MultiPoly z(std::size_t d, std::size_t i) { return MultiPoly::variable(d, i); }
MixedSymbol hol(const MultiPoly& p) { return MixedSymbol::holomorphic(p); }
MixedSymbol anti(const MultiPoly& p) { return MixedSymbol::antiholomorphic(p); }

QuotientDescriptor s2_quotient(const std::string& label, std::vector<double> alpha = {0, 0}) {
  auto g = ReflectionGroup::symmetric(2);
  return QuotientDescriptor::make(g, character_by_label(g, label), Weight::polydisc(std::move(alpha)));
}

}  // namespace

TEST_CASE("descriptor validation") {
  auto g = ReflectionGroup::symmetric(2);
  CHECK_THROWS_AS(QuotientDescriptor::make(g, character_by_label(g, "sign"), Weight::polydisc({0, 1})), Error);
  auto ab = ReflectionGroup::cyclic_diagonal({2, 3});
  CHECK_NOTHROW(QuotientDescriptor::make(ab, character_by_label(ab, "sign"), Weight::polydisc({0, 1})));
}

TEST_CASE("quotient weights") {
  auto sign = s2_quotient("sign");
  auto triv = s2_quotient("trivial");
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    Point p{oracle::rand_disc_point(rng), oracle::rand_disc_point(rng)};
    CHECK(std::abs(omega_rho_eval(sign, p) - 1.0) < 1e-10);
  }
  CHECK(std::abs(omega_rho_eval(triv, Point{0.5, 0.1}) - 6.25) < 1e-12);
  try {
    omega_rho_eval(sign, Point{0.3, 0.3});
    FAIL("expected a singular-point error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_point);
  }
}

TEST_CASE("Gamma on S_2") {
  auto triv = s2_quotient("trivial");
  auto sign = s2_quotient("sign");
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(coeff_distance(gamma_apply(triv, MultiPoly::constant(2, 1.0)), MultiPoly::constant(2, r)) < 1e-15);
  CHECK(coeff_distance(gamma_apply(triv, z(2, 0)), (z(2, 0) + z(2, 1)) * r) < 1e-15);
  CHECK(coeff_distance(gamma_apply(sign, MultiPoly::constant(2, 1.0)), (z(2, 0) - z(2, 1)) * r) < 1e-15);
  MultiPoly phi = z(2, 0) * z(2, 1) + z(2, 1) * cplx(0, 3);
  CHECK(coeff_distance(gamma_preimage(sign, gamma_apply(sign, phi)), phi) < 1e-12);
}

TEST_CASE("isotypic bases on S_2") {
  auto sign = s2_quotient("sign");
  auto basis = isotypic_basis(sign, 8);
  CHECK(basis.size() == 36);
  CHECK(coeff_distance(basis.vectors.front(), z(2, 0) - z(2, 1)) < 1e-14);
  const MonomialNorms norms(Weight::unweighted_polydisc(2));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j)
      CHECK(std::abs(inner_product(basis.vectors[i], basis.vectors[j], norms) - (i == j ? 1.0 : 0.0)) < 1e-10);
    CHECK_NOTHROW(divide_by_generator(sign.group, sign.character, basis.vectors[i]));
  }
  auto triv = isotypic_basis(s2_quotient("trivial"), 8);
  CHECK(triv.size() == 45);
  CHECK(coeff_distance(triv.vectors[0], MultiPoly::constant(2, 1.0)) < 1e-15);
  CHECK(coeff_distance(triv.vectors[1], z(2, 0) + z(2, 1)) < 1e-14);
}

TEST_CASE("compressed Toeplitz matrices") {
  auto sign = s2_quotient("sign");
  auto basis = isotypic_basis(sign, 6);
  auto id = compressed_toeplitz(sign, basis, MixedSymbol::constant(2, 1.0));
  CHECK((id.matrix - CMatrix::Identity(id.matrix.rows(), id.matrix.cols())).cwiseAbs().maxCoeff() < 1e-12);

  auto t = compressed_toeplitz(sign, basis, hol(z(2, 0) * z(2, 1)));
  const auto pos = [&](MultiIndex l) {
    return static_cast<Eigen::Index>(std::find(basis.labels.begin(), basis.labels.end(), l) - basis.labels.begin());
  };
  CHECK(std::abs(t.matrix(pos(MultiIndex({2, 1})), pos(MultiIndex({1, 0}))) - std::sqrt(1.0 / 3.0)) < 1e-14);

  auto triv = s2_quotient("trivial");
  auto tb = isotypic_basis(triv, 6);
  auto a = compressed_toeplitz(triv, tb, hol(z(2, 0) * z(2, 1)));
  auto b = compressed_toeplitz(triv, tb, anti(z(2, 0) * z(2, 1)));
  CHECK((a.matrix.adjoint() - b.matrix).cwiseAbs().maxCoeff() < 1e-14);

  try {
    compressed_toeplitz(sign, basis, hol(z(2, 0)));
    FAIL("expected an invariance error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invariance);
  }
}

TEST_CASE("quotient quadrature reproduces the compressed matrices") {
  auto sign = s2_quotient("sign");
  auto basis = isotypic_basis(sign, 5);
  auto unit = quotient_toeplitz_quadrature(sign, basis, [](std::span<const cplx>) { return cplx{1.0}; });
  CHECK((unit.matrix - CMatrix::Identity(unit.matrix.rows(), unit.matrix.cols())).cwiseAbs().maxCoeff() < 1e-8);

  auto quad = quotient_toeplitz_quadrature(sign, basis, [](std::span<const cplx> w) { return w[1]; });
  auto exact = compressed_toeplitz(sign, basis, hol(z(2, 0) * z(2, 1)));
  CHECK(residual(quad.matrix, exact.matrix).max_abs < 1e-8);

  auto sa = quotient_toeplitz_quadrature(sign, basis, [](std::span<const cplx> w) { return cplx{std::norm(w[0])}; });
  CHECK((sa.matrix - sa.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Gamma is an isometry") {
  for (std::vector<double> alpha : {std::vector<double>{0, 0}, std::vector<double>{1, 1}}) {
    for (const char* label : {"trivial", "sign"}) {
      auto q = s2_quotient(label, alpha);
      MultiPoly phi = z(2, 0) * z(2, 0) + z(2, 1) * cplx(0.5, -1.0);
      MultiPoly psi = z(2, 0) * z(2, 1) + MultiPoly::constant(2, 2.0) + z(2, 0);
      auto c = gamma_isometry(q, phi, psi);
      CHECK(c.defect() < 1e-9);
    }
  }
}

TEST_CASE("kernel identity") {
  auto sign = s2_quotient("sign");
  Point zp{0.4, -0.2};
  double last = 1e9;
  for (int n : {6, 8, 10, 12, 14}) {
    auto basis = isotypic_basis(sign, n);
    auto k = kernel_identity(sign, basis, zp, zp);
    CHECK(k.finite_sum_residual < 1e-12);
    CHECK(k.closed_form_residual < last);
    last = k.closed_form_residual;
  }
  CHECK(last < 1e-6);
  auto basis = isotypic_basis(sign, 8);
  Point diag{0.3, 0.3};
  auto k = kernel_identity(sign, basis, diag, diag);
  CHECK(std::abs(k.basis_sum) < 1e-12);
  CHECK(k.finite_sum_residual < 1e-12);
}

TEST_CASE("reducing subspaces") {
  auto g = ReflectionGroup::symmetric(2);
  const auto theta = basic_map(g);
  MixedSymbol u = compose_map(hol(z(2, 1)) * anti(z(2, 0)) + anti(z(2, 1)), theta);
  CHECK(reducing_subspace_defect(g, Weight::unweighted_polydisc(2), u, 6) < 1e-12);
  CHECK_THROWS_AS(reducing_subspace_defect(g, Weight::unweighted_polydisc(2), hol(z(2, 0)), 6), Error);
}

TEST_CASE("transfer checks") {
  auto g = ReflectionGroup::symmetric(2);
  auto w = Weight::unweighted_polydisc(2);
  const MixedSymbol u = hol(z(2, 0)) * anti(z(2, 1)) + anti(z(2, 0));
  const MixedSymbol v = hol(z(2, 1) + z(2, 0) * z(2, 0));
  auto pos = transfer_check(g, w, u, v, u * v, TransferMode::product, 8);
  CHECK(pos.joint_consistent);
  CHECK(pos.full_space.pass);
  for (const auto& c : pos.characters) CHECK(c.residual < 1e-10);

  const MixedSymbol w2 = hol(z(2, 1)), w2b = anti(z(2, 1));
  auto neg = transfer_check(g, w, w2, w2b, w2 * w2b, TransferMode::product, 8);
  CHECK(neg.joint_consistent);
  CHECK(neg.full_space.residual > 1e-3);
  for (const auto& c : neg.characters) CHECK(c.residual > 1e-3);

  auto comm = transfer_check(g, w, hol(z(2, 0)), hol(z(2, 0) * z(2, 0)), MixedSymbol(2), TransferMode::commutator, 8);
  CHECK(comm.joint_consistent);
  CHECK(comm.full_space.residual < 1e-10);

  auto bad = transfer_check(g, w, w2, w2b, MixedSymbol(2), TransferMode::commutator, 8);
  CHECK(bad.joint_consistent);
  CHECK(bad.full_space.residual > 1e-3);
  for (const auto& c : bad.characters) CHECK(c.residual > 1e-3);

  auto j = neg.to_json();
  CHECK(j.contains("joint_consistent"));
  CHECK(j["characters"].size() == 2);
}

TEST_CASE("product indicator residuals") {
  auto w = Weight::polydisc({0});
  const MultiPoly zero(1), x = z(1, 0);
  std::vector<Point> pts{{0.0}, {cplx(0.3, 0.2)}, {cplx(-0.5, 0.1)}};

  auto a = lemma_pr_residual(x, zero, x, zero, hol(x * x), w, pts);
  CHECK(a.berezin_residual < 1e-8);
  CHECK(a.operator_residual < 1e-12);

  auto b = lemma_pr_residual(zero, x, x, zero, hol(x) * anti(x), w, pts);
  CHECK(b.berezin_residual < 1e-8);
  CHECK(b.operator_residual < 1e-12);

  auto c = lemma_pr_residual(x, zero, zero, x, hol(x) * anti(x), w, {{0.0}});
  CHECK(std::abs(c.points[0].residual - 0.5) < 1e-6);
  CHECK(std::abs(c.operator_residual - 0.5) < 1e-12);
}

TEST_CASE("pluriharmonic lifts") {
  auto q = s2_quotient("trivial");
  CHECK(coeff_distance(pluriharmonic_lift(hol(z(2, 0)), q), hol(z(2, 0) + z(2, 1))) < 1e-15);
  CHECK(coeff_distance(pluriharmonic_lift(anti(z(2, 1)), q), anti(z(2, 0) * z(2, 1))) < 1e-15);
  try {
    pluriharmonic_lift(hol(z(2, 0)) * anti(z(2, 0)), q);
    FAIL("expected a not-pluriharmonic error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_pluriharmonic);
  }
}

TEST_CASE("symmetrized bidisc volume") {
  auto v = quotient_volume(s2_quotient("sign"));
  CHECK(std::abs(v.exact - 0.5) < 1e-15);
  CHECK(std::abs(v.quadrature - 0.5) < 1e-8);
}
