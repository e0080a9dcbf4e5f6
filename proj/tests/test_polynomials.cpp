#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qb/group_action.hpp"
#include "qb/polynomial.hpp"

using namespace qb;

namespace {

MultiPoly z(std::size_t d, std::size_t i) { return MultiPoly::variable(d, i); }

MultiPoly random_poly(std::mt19937_64& rng, std::size_t d, int max_deg, int terms) {
  std::normal_distribution<double> c(0.0, 1.0);
  MultiPoly p(d);
  for (int t = 0; t < terms; ++t) {
    MultiIndex e(d);
    int left = max_deg;
    for (std::size_t i = 0; i < d; ++i) {
      const int k = std::uniform_int_distribution<int>(0, left)(rng);
      e.set(i, k);
      left -= k;
    }
    p.add_term(e, cplx(c(rng), c(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("multi-index ordering and enumeration") {
  CHECK(MultiIndex({0, 1}) < MultiIndex({2, 0}));
  CHECK(MultiIndex({1, 0}) > MultiIndex({0, 1}));
  CHECK(box_indices(2, 2).size() == 9);
  CHECK(homogeneous_indices(3, 2).size() == 6);
  auto box = box_indices(2, 3);
  CHECK(std::is_sorted(box.begin(), box.end()));
  CHECK_THROWS_AS(MultiIndex(1).set(0, 65), Error);
}

TEST_CASE("arithmetic and pruning") {
  MultiPoly p = z(2, 0) + z(2, 1);
  MultiPoly q = p * p - z(2, 0) * z(2, 0) - z(2, 1) * z(2, 1);
  CHECK(coeff_distance(q, z(2, 0) * z(2, 1) * 2.0) < 1e-15);
  MultiPoly tiny = MultiPoly::constant(2, 1e-16);
  CHECK(tiny.is_zero());
  CHECK((p - p).is_zero());
  CHECK(p.pow(3).total_degree() == 3);
}

TEST_CASE("group action examples") {
  auto s2 = ReflectionGroup::symmetric(2);
  const auto& swap = s2.element(s2.identity_index() == 0 ? 1 : 0);
  CHECK(coeff_distance(group_act(swap, z(2, 0)), z(2, 1)) < 1e-15);

  auto z3 = ReflectionGroup::cyclic_diagonal({3});
  for (const auto& el : z3.elements()) CHECK(coeff_distance(group_act(el, z(1, 0).pow(3)), z(1, 0).pow(3)) < 1e-14);

  MixedSymbol u = MixedSymbol::term(MultiIndex({1, 0}), MultiIndex({0, 1}));
  MixedSymbol expect = MixedSymbol::term(MultiIndex({0, 1}), MultiIndex({1, 0}));
  CHECK(coeff_distance(group_act(swap, u), expect) < 1e-15);
}

TEST_CASE("group action composes") {
  std::mt19937_64 rng(3);
  for (const auto& g : {ReflectionGroup::symmetric(3), ReflectionGroup::cyclic_diagonal({3, 2})}) {
    MultiPoly f = random_poly(rng, g.dimension(), 4, 6);
    for (std::size_t i = 0; i < g.order(); ++i)
      for (std::size_t j = 0; j < g.order(); ++j) {
        const auto lhs = group_act(g.element(g.product_index(i, j)), f);
        const auto rhs = group_act(g.element(i), group_act(g.element(j), f));
        CHECK(coeff_distance(lhs, rhs) < 1e-12);
      }
  }
}

TEST_CASE("basic maps") {
  auto s2 = basic_map(ReflectionGroup::symmetric(2));
  CHECK(coeff_distance(s2.components[0], z(2, 0) + z(2, 1)) < 1e-15);
  CHECK(coeff_distance(s2.components[1], z(2, 0) * z(2, 1)) < 1e-15);

  auto s3 = basic_map(ReflectionGroup::symmetric(3));
  CHECK(coeff_distance(s3.components[1], z(3, 0) * z(3, 1) + z(3, 0) * z(3, 2) + z(3, 1) * z(3, 2)) < 1e-15);

  auto ab = basic_map(ReflectionGroup::cyclic_diagonal({2, 3}));
  CHECK(coeff_distance(ab.components[0], z(2, 0).pow(2)) < 1e-15);
  CHECK(coeff_distance(ab.components[1], z(2, 1).pow(3)) < 1e-15);
}

TEST_CASE("composition examples") {
  auto theta = basic_map(ReflectionGroup::symmetric(2));
  CHECK(coeff_distance(compose_map(z(2, 0), theta), z(2, 0) + z(2, 1)) < 1e-15);
  MultiPoly newton = z(2, 0) * z(2, 0) - z(2, 1) * 2.0;
  CHECK(coeff_distance(compose_map(newton, theta), z(2, 0).pow(2) + z(2, 1).pow(2)) < 1e-14);

  auto ab = basic_map(ReflectionGroup::cyclic_diagonal({2, 3}));
  CHECK(coeff_distance(compose_map(z(2, 1), ab), z(2, 1).pow(3)) < 1e-15);
}

TEST_CASE("compositions with the basic map are invariant") {
  std::mt19937_64 rng(5);
  for (const auto& g : {ReflectionGroup::symmetric(2), ReflectionGroup::symmetric(3),
                        ReflectionGroup::cyclic_diagonal({2, 3})}) {
    const auto theta = basic_map(g);
    for (int deg = 1; deg <= 6; ++deg) {
      MultiPoly f = random_poly(rng, g.dimension(), deg, 3);
      CHECK(invariance_residual(g, compose_map(f, theta)) < 1e-9);
    }
  }
}

TEST_CASE("Jacobian determinants") {
  auto s2 = jacobian_det(basic_map(ReflectionGroup::symmetric(2)));
  CHECK(coeff_distance(s2, z(2, 0) - z(2, 1)) < 1e-15);
  auto sq = jacobian_det(basic_map(ReflectionGroup::cyclic_diagonal({2})));
  CHECK(coeff_distance(sq, z(1, 0) * 2.0) < 1e-15);
  auto s3 = jacobian_det(basic_map(ReflectionGroup::symmetric(3)));
  MultiPoly vdm = (z(3, 0) - z(3, 1)) * (z(3, 0) - z(3, 2)) * (z(3, 1) - z(3, 2));
  const bool plus = coeff_distance(s3, vdm) < 1e-14;
  const bool minus = coeff_distance(s3, vdm * -1.0) < 1e-14;
  CHECK((plus || minus));
}

TEST_CASE("Jacobian equals c * prod l_i^{m_i - 1}") {
  for (const auto& g : {ReflectionGroup::symmetric(2), ReflectionGroup::symmetric(3),
                        ReflectionGroup::cyclic_diagonal({3, 2})}) {
    MultiPoly prod = MultiPoly::constant(g.dimension(), 1.0);
    for (const auto& h : g.hyperplanes()) prod = prod * h.as_polynomial().pow(h.cyclic_order - 1);
    MultiPoly jac = jacobian_det(basic_map(g));
    const MultiIndex lead = prod.leading_index();
    const cplx c = jac.coeff(lead) / prod.coeff(lead);
    CHECK(coeff_distance(jac, prod * c) < 1e-10);
  }
}

TEST_CASE("invariant dimensions match partition counts") {
  for (int d : {2, 3}) {
    auto g = ReflectionGroup::symmetric(d);
    for (int n = 0; n <= 8; ++n) CHECK(invariant_dimension(g, n) == oracle::partitions(n, d));
  }
  CHECK(invariant_dimension(ReflectionGroup::symmetric(2), 4) == 3);
  CHECK(invariant_dimension(ReflectionGroup::symmetric(3), 0) == 1);
  CHECK(invariant_dimension(ReflectionGroup::cyclic_diagonal({2}), 3) == 0);
}

TEST_CASE("mixed symbols") {
  MixedSymbol u = MixedSymbol::holomorphic(z(2, 0)) + MixedSymbol::antiholomorphic(z(2, 1) * cplx(0, 2));
  CHECK(u.is_pluriharmonic());
  Point p{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  CHECK(std::abs(u.evaluate(p) - (p[0] + std::conj(cplx(0, 2) * p[1]))) < 1e-15);
  MixedSymbol m = MixedSymbol::term(MultiIndex({1, 0}), MultiIndex({1, 0}));
  CHECK(!m.is_pluriharmonic());
  CHECK(m.band_margin() == 1);
  CHECK(std::abs(u.conjugate().evaluate(p) - std::conj(u.evaluate(p))) < 1e-15);
  CHECK(std::abs((u * m).evaluate(p) - u.evaluate(p) * m.evaluate(p)) < 1e-14);
}

TEST_CASE("symbol lift through theta") {
  auto theta = basic_map(ReflectionGroup::symmetric(2));
  MixedSymbol u = MixedSymbol::term(MultiIndex({0, 1}), MultiIndex({0, 1}));  // |w2|^2
  MixedSymbol lifted = compose_map(u, theta);
  Point p{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  CHECK(std::abs(lifted.evaluate(p) - std::norm(p[0] * p[1])) < 1e-15);
}

TEST_CASE("polynomial JSON round trip") {
  std::mt19937_64 rng(9);
  MultiPoly f = random_poly(rng, 3, 5, 7);
  CHECK(coeff_distance(multipoly_from_json(to_json(f), 3), f) == 0.0);
  MixedSymbol u = MixedSymbol::term(MultiIndex({1, 2}), MultiIndex({0, 1}), cplx(0.5, -1.5));
  CHECK(coeff_distance(mixed_from_json(to_json(u), 2), u) == 0.0);
}
