#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qb/group_action.hpp"
#include "qb/reflection_group.hpp"
#include "qb/smith.hpp"

using namespace qb;

namespace {
std::vector<std::vector<long long>> to_rows(const IntMatrix& m) {
  std::vector<std::vector<long long>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(r)].push_back(m(r, c));
  return out;
}
}  // namespace

TEST_CASE("symmetric groups enumerate permutations and transposition hyperplanes") {
  auto s2 = ReflectionGroup::symmetric(2);
  CHECK(s2.order() == 2);
  REQUIRE(s2.hyperplanes().size() == 1);
  CHECK(s2.hyperplanes()[0].cyclic_order == 2);
  CHECK(coeff_distance(s2.hyperplanes()[0].as_polynomial(),
                       MultiPoly::variable(2, 0) - MultiPoly::variable(2, 1)) < 1e-15);

  auto s3 = ReflectionGroup::symmetric(3);
  CHECK(s3.order() == 6);
  CHECK(s3.hyperplanes().size() == 3);
  for (const auto& h : s3.hyperplanes()) CHECK(h.cyclic_order == 2);

  CHECK(ReflectionGroup::symmetric(4).order() == 24);
  CHECK_THROWS_AS(ReflectionGroup::symmetric(1), Error);
  CHECK_THROWS_AS(ReflectionGroup::symmetric(7), Error);
}

TEST_CASE("group closure and inverses") {
  for (const auto& g : {ReflectionGroup::symmetric(3), ReflectionGroup::cyclic_diagonal({3, 2}),
                        ReflectionGroup::cyclic_diagonal({4})}) {
    const auto id = CMatrix::Identity(static_cast<Eigen::Index>(g.dimension()), static_cast<Eigen::Index>(g.dimension()));
    for (std::size_t i = 0; i < g.order(); ++i) {
      const auto inv = g.inverse_index(i);
      CHECK(((g.element(i).matrix * g.element(inv).matrix) - id).cwiseAbs().maxCoeff() < 1e-12);
      for (std::size_t j = 0; j < g.order(); ++j) {
        CHECK(g.find(g.element(i).matrix * g.element(j).matrix).has_value());
      }
    }
  }
}

TEST_CASE("diagonal cyclic groups") {
  auto z2 = ReflectionGroup::cyclic_diagonal({2});
  CHECK(z2.order() == 2);
  REQUIRE(z2.hyperplanes().size() == 1);
  CHECK(z2.hyperplanes()[0].cyclic_order == 2);

  auto z31 = ReflectionGroup::cyclic_diagonal({3, 1});
  CHECK(z31.order() == 3);
  REQUIRE(z31.hyperplanes().size() == 1);
  CHECK(z31.hyperplanes()[0].cyclic_order == 3);
  CHECK(std::abs(z31.hyperplanes()[0].linear_form[0] - cplx(1.0)) < 1e-15);
  CHECK(std::abs(z31.hyperplanes()[0].linear_form[1]) < 1e-15);

  auto z22 = ReflectionGroup::cyclic_diagonal({2, 2});
  CHECK(z22.order() == 4);
  CHECK(one_dim_characters(z22).size() == 4);

  CHECK_THROWS_AS(ReflectionGroup::cyclic_diagonal({1000, 1000}), Error);
}

TEST_CASE("one-dimensional characters and exponents") {
  auto s2 = ReflectionGroup::symmetric(2);
  auto chars = one_dim_characters(s2);
  REQUIRE(chars.size() == 2);
  CHECK(chars[0].label == "trivial");
  CHECK(chars[1].label == "sign");
  const auto& sign = chars[1];
  for (std::size_t i = 0; i < s2.order(); ++i) {
    CHECK(std::abs(sign(i) * s2.element(i).det() - 1.0) < 1e-12);
  }
  CHECK(sign.exponents == std::vector<int>{1});
  CHECK(chars[0].exponents == std::vector<int>{0});

  auto z3 = ReflectionGroup::cyclic_diagonal({3});
  auto c3 = one_dim_characters(z3);
  REQUIRE(c3.size() == 3);
  std::vector<int> cs;
  for (const auto& c : c3) cs.push_back(c.exponents[0]);
  std::sort(cs.begin(), cs.end());
  CHECK(cs == std::vector<int>{0, 1, 2});
  for (const auto& c : c3) CHECK(character_defect(z3, c) < 1e-12);

  for (const auto& c : one_dim_characters(ReflectionGroup::symmetric(3))) CHECK(character_defect(ReflectionGroup::symmetric(3), c) < 1e-12);
}

TEST_CASE("exponent property chi(a_i) = det(a_i)^{c_i}") {
  for (const auto& g : {ReflectionGroup::symmetric(3), ReflectionGroup::cyclic_diagonal({3, 4})}) {
    for (const auto& chi : one_dim_characters(g)) {
      for (std::size_t h = 0; h < g.hyperplanes().size(); ++h) {
        const auto& hp = g.hyperplanes()[h];
        const cplx det = g.element(hp.generator).det();
        CHECK(std::abs(chi(hp.generator) - std::pow(det, chi.exponents[h])) < 1e-10);
        CHECK(chi.exponents[h] >= 0);
        CHECK(chi.exponents[h] < hp.cyclic_order);
      }
    }
  }
}

TEST_CASE("generating polynomials") {
  auto s2 = ReflectionGroup::symmetric(2);
  CHECK(coeff_distance(generating_polynomial(s2, character_by_label(s2, "trivial")), MultiPoly::constant(2, 1.0)) < 1e-15);
  CHECK(coeff_distance(generating_polynomial(s2, character_by_label(s2, "sign")),
                       MultiPoly::variable(2, 0) - MultiPoly::variable(2, 1)) < 1e-15);

  auto s3 = ReflectionGroup::symmetric(3);
  auto z = [](std::size_t i) { return MultiPoly::variable(3, i); };
  MultiPoly vdm = (z(0) - z(1)) * (z(0) - z(2)) * (z(1) - z(2));
  CHECK(coeff_distance(generating_polynomial(s3, character_by_label(s3, "sign")), vdm) < 1e-14);
}

TEST_CASE("sign generating polynomial is proportional to the Jacobian") {
  std::mt19937_64 rng(7);
  for (const auto& g : {ReflectionGroup::symmetric(2), ReflectionGroup::symmetric(3),
                        ReflectionGroup::cyclic_diagonal({2, 3})}) {
    const auto chi = character_by_label(g, "sign");
    const MultiPoly ell = generating_polynomial(g, chi);
    const MultiPoly jac = jacobian_det(basic_map(g));
    Point p0(g.dimension());
    for (auto& v : p0) v = oracle::rand_disc_point(rng);
    const cplx c = jac.evaluate(p0) / ell.evaluate(p0);
    for (int k = 0; k < 20; ++k) {
      Point p(g.dimension());
      for (auto& v : p) v = oracle::rand_disc_point(rng);
      CHECK(std::abs(jac.evaluate(p) - c * ell.evaluate(p)) < 1e-10);
    }
  }
}

TEST_CASE("custom groups need user characters") {
  CMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  auto g = ReflectionGroup::from_generators({swap});
  CHECK(g.order() == 2);
  CHECK(g.kind() == GroupKind::custom);
  CHECK_THROWS_AS(one_dim_characters(g), Error);
  auto chi = make_character(g, {1.0, -1.0}, "mine");
  CHECK(character_defect(g, chi) < 1e-12);
}

TEST_CASE("group JSON round trip") {
  for (const auto& g : {ReflectionGroup::symmetric(3), ReflectionGroup::cyclic_diagonal({2, 3})}) {
    auto back = group_from_json(to_json(g));
    CHECK(back.order() == g.order());
    CHECK(back.kind() == g.kind());
    CHECK(back.label() == g.label());
  }
}

TEST_CASE("Smith normal form documented examples") {
  IntMatrix id = IntMatrix::Identity(3, 3);
  CHECK(smith_normal_form(id).D == id);

  IntMatrix a(2, 2);
  a << 2, 0, 0, 3;
  auto s = smith_normal_form(a);
  CHECK(s.D(0, 0) == 1);
  CHECK(s.D(1, 1) == 6);

  IntMatrix b(2, 2);
  b << 2, 4, 6, 8;
  auto t = smith_normal_form(b);
  CHECK(t.D(0, 0) == 2);
  CHECK(t.D(1, 1) == 4);
  CHECK(t.P * t.D * t.Q == b);

  IntMatrix sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(smith_normal_form(sing), Error);
}

TEST_CASE("Smith normal form agrees with determinantal divisors") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> entry(-10, 10);
  int done = 0;
  while (done < 40) {
    const int n = 2 + done % 2;
    IntMatrix a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) a(r, c) = entry(rng);
    if (oracle::det_cofactor(to_rows(a)) == 0) continue;
    auto s = smith_normal_form(a);
    CHECK(s.P * s.D * s.Q == a);
    CHECK(std::llabs(int_determinant(s.P)) == 1);
    CHECK(std::llabs(int_determinant(s.Q)) == 1);
    const auto inv = oracle::smith_invariants(to_rows(a));
    for (int i = 0; i < n; ++i) {
      CHECK(s.D(i, i) == inv[static_cast<std::size_t>(i)]);
      if (i + 1 < n) CHECK(s.D(i + 1, i + 1) % s.D(i, i) == 0);
    }
    ++done;
  }
}

TEST_CASE("monomial polyhedron groups") {
  auto id = monomial_polyhedron_group(IntMatrix::Identity(2, 2));
  CHECK(id.group.order() == 1);
  CHECK(id.deltas == std::vector<long long>{1, 1});

  IntMatrix b(2, 2);
  b << 1, 0, 0, 2;
  auto m = monomial_polyhedron_group(b);
  CHECK(m.deltas == std::vector<long long>{1, 2});
  CHECK(m.group.order() == 2);

  IntMatrix bad(2, 2);
  bad << 2, 1, 1, 2;
  CHECK_THROWS_AS(monomial_polyhedron_group(bad), Error);
}
