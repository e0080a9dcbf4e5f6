#include "qb/isotypic.hpp"

#include <algorithm>
#include <cmath>

namespace qb {

MultiPoly project(const ReflectionGroup& g, const Character& chi, const MultiPoly& f) {
  MultiPoly out(f.dim());
  const double scale = static_cast<double>(chi.degree) / static_cast<double>(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (chi(i) == cplx{}) continue;
    out += group_act(g.element(i), f) * (chi(i) * scale);
  }
  return out;
}

MixedSymbol project(const ReflectionGroup& g, const Character& chi, const MixedSymbol& u) {
  MixedSymbol out(u.dim());
  const double scale = static_cast<double>(chi.degree) / static_cast<double>(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (chi(i) == cplx{}) continue;
    out += group_act(g.element(i), u) * (chi(i) * scale);
  }
  return out;
}

double relative_invariance_residual(const ReflectionGroup& g, const Character& chi, const MultiPoly& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    MultiPoly moved = group_act(g.element(g.inverse_index(i)), f);
    worst = std::max(worst, coeff_distance(moved, f * chi(i)));
  }
  return worst;
}

double completeness_defect(const ReflectionGroup& g, int n) {
  const auto table = full_character_table(g);
  double worst = 0.0;
  for (int deg = 0; deg <= n; ++deg) {
    for (const auto& e : homogeneous_indices(g.dimension(), deg)) {
      MultiPoly m = MultiPoly::monomial(e);
      MultiPoly sum(g.dimension());
      for (const auto& chi : table) sum += project(g, chi, m);
      worst = std::max(worst, coeff_distance(sum, m));
    }
  }
  return worst;
}

DivisionResult divide(const MultiPoly& f, const MultiPoly& divisor) {
  if (divisor.is_zero()) throw Error(ErrorCode::domain, "division by the zero polynomial");
  const MultiIndex lead = divisor.leading_index();
  const cplx lead_c = divisor.coeff(lead);
  MultiPoly p = f;
  MultiPoly q(f.dim()), r(f.dim());
  while (!p.is_zero()) {
    const MultiIndex lt = p.leading_index();
    const cplx lc = p.coeff(lt);
    if (lead.divides(lt)) {
      MultiPoly t = MultiPoly::monomial(lt - lead, lc / lead_c);
      q += t;
      p -= t * divisor;
      // the leading term cancels exactly in exact arithmetic
      if (p.coeff(lt) != cplx{}) p.add_term(lt, -p.coeff(lt));
    } else {
      r.add_term(lt, lc);
      p.add_term(lt, -lc);
    }
  }
  return {q, r};
}

MultiPoly divide_by_generator(const ReflectionGroup& g, const Character& chi, const MultiPoly& f) {
  const double scale = std::max(1.0, f.max_abs_coeff());
  if (relative_invariance_residual(g, chi, f) > kRelativeInvarianceTol * scale) {
    throw Error(ErrorCode::divisibility, "polynomial is not relative invariant for '" + chi.label + "'");
  }
  auto [quotient, remainder] = divide(f, generating_polynomial(g, chi));
  if (remainder.max_abs_coeff() > kDivisionTol * scale) {
    throw Error(ErrorCode::divisibility, "nonzero remainder on division by l_" + chi.label);
  }
  if (invariance_residual(g, quotient) > 1e-8 * scale) {
    throw Error(ErrorCode::internal, "quotient by the generating polynomial is not invariant");
  }
  return quotient;
}

namespace {
void weighted_exponents(const std::vector<int>& weights, std::size_t pos, int remaining, MultiIndex& cur,
                        std::vector<MultiIndex>& out) {
  if (pos == weights.size()) {
    if (remaining == 0) out.push_back(cur);
    return;
  }
  for (int k = 0; k * weights[pos] <= remaining; ++k) {
    cur.set(pos, k);
    weighted_exponents(weights, pos + 1, remaining - k * weights[pos], cur, out);
  }
  cur.set(pos, 0);
}
}  // namespace

MultiPoly invariant_to_theta(const ReflectionGroup& g, const MultiPoly& f) {
  const double scale = std::max(1.0, f.max_abs_coeff());
  if (invariance_residual(g, f) > kRelativeInvarianceTol * scale) {
    throw Error(ErrorCode::domain, "invariant_to_theta needs a G-invariant polynomial");
  }
  const PolyMap theta = basic_map(g);
  const std::vector<int> weights = basic_degrees(g);
  const std::size_t d = g.dimension();
  MultiPoly out(d);
  for (int deg = 0; deg <= f.total_degree(); ++deg) {
    MultiPoly part = f.homogeneous_part(deg);
    if (part.is_zero()) continue;
    std::vector<MultiIndex> cands;
    MultiIndex cur(d);
    weighted_exponents(weights, 0, deg, cur, cands);
    std::vector<MultiPoly> images;
    std::map<MultiIndex, Eigen::Index> rows;
    for (const auto& [e, c] : part.terms()) rows.emplace(e, 0);
    for (const auto& k : cands) {
      images.push_back(compose_map(MultiPoly::monomial(k), theta));
      for (const auto& [e, c] : images.back().terms()) rows.emplace(e, 0);
    }
    Eigen::Index r = 0;
    for (auto& [e, idx] : rows) idx = r++;
    CMatrix a = CMatrix::Zero(r, static_cast<Eigen::Index>(cands.size()));
    CVector b = CVector::Zero(r);
    for (std::size_t j = 0; j < images.size(); ++j)
      for (const auto& [e, c] : images[j].terms()) a(rows.at(e), static_cast<Eigen::Index>(j)) = c;
    for (const auto& [e, c] : part.terms()) b(rows.at(e)) = c;
    if (cands.empty()) throw Error(ErrorCode::internal, "no theta-monomial of matching weighted degree");
    CVector x = a.completeOrthogonalDecomposition().solve(b);
    if ((a * x - b).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      throw Error(ErrorCode::internal, "invariant not in the span of theta-monomials");
    }
    for (std::size_t j = 0; j < cands.size(); ++j) out.add_term(cands[j], x(static_cast<Eigen::Index>(j)));
  }
  return out;
}

bool gram_schmidt_append(std::vector<MultiPoly>& basis, MultiPoly v, const InnerProduct& inner) {
  const double norm0 = std::sqrt(std::abs(inner(v, v)));
  if (norm0 == 0.0) return false;
  auto sweep = [&] {
    for (const auto& q : basis) {
      cplx c = inner(v, q);
      if (c != cplx{}) v -= q * c;
    }
  };
  sweep();
  double norm = std::sqrt(std::abs(inner(v, v)));
  if (norm < 1e-8 * norm0) {
    sweep();
    norm = std::sqrt(std::abs(inner(v, v)));
    if (norm < 1e-8 * norm0) return false;
  }
  basis.push_back(v * (1.0 / norm));
  return true;
}

IsotypicComponent isotypic_component(const ReflectionGroup& g, const Character& chi, int n,
                                     const InnerProduct& inner) {
  const std::size_t d = g.dimension();
  std::vector<std::pair<MultiIndex, MultiPoly>> found;
  std::vector<MultiPoly> basis;
  for (int deg = 0; deg <= static_cast<int>(d) * n; ++deg) {
    auto level = homogeneous_indices(d, deg);
    for (auto it = level.rbegin(); it != level.rend(); ++it) {
      if (it->max_exponent() > n) continue;
      MultiPoly v = project(g, chi, MultiPoly::monomial(*it));
      if (v.is_zero()) continue;
      if (gram_schmidt_append(basis, v, inner)) found.emplace_back(*it, basis.back());
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  IsotypicComponent out{chi, {}, {}, n};
  for (auto& [label, vec] : found) {
    out.labels.push_back(label);
    out.basis.push_back(std::move(vec));
  }
  return out;
}

}  // namespace qb
