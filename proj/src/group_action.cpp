#include "qb/group_action.hpp"

#include <algorithm>

namespace qb {

namespace {

CMatrix inverse_matrix(const CMatrix& m) {
  CMatrix adj = m.adjoint();
  if ((adj * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-13) return adj;
  return m.inverse();
}

/// Substitutes z -> M z into a polynomial whose variables are split into
/// `blocks` consecutive groups of size M.rows(); block k uses matrices[k].
MultiPoly linear_substitution(const MultiPoly& f, const std::vector<CMatrix>& matrices) {
  const std::size_t n = f.dim();
  const std::size_t d = static_cast<std::size_t>(matrices.front().rows());

  // Monomial matrices map monomials to monomials.
  bool monomial = true;
  std::vector<std::size_t> target(n);
  std::vector<cplx> scale(n);
  for (std::size_t blk = 0; blk < matrices.size() && monomial; ++blk) {
    for (std::size_t i = 0; i < d; ++i) {
      int nonzero = 0;
      for (std::size_t j = 0; j < d; ++j) {
        if (std::abs(matrices[blk](i, j)) > 0.0) {
          ++nonzero;
          target[blk * d + i] = blk * d + j;
          scale[blk * d + i] = matrices[blk](i, j);
        }
      }
      if (nonzero != 1) monomial = false;
    }
  }
  if (monomial) {
    MultiPoly out(n);
    for (const auto& [e, c] : f.terms()) {
      MultiIndex img(n);
      cplx coeff = c;
      for (std::size_t v = 0; v < n; ++v) {
        if (e[v] == 0) continue;
        img.set(target[v], img[target[v]] + e[v]);
        for (int k = 0; k < e[v]; ++k) coeff *= scale[v];
      }
      out.add_term(img, coeff);
    }
    return out;
  }

  PolyMap lin;
  for (std::size_t blk = 0; blk < matrices.size(); ++blk) {
    for (std::size_t i = 0; i < d; ++i) {
      MultiPoly row(n);
      for (std::size_t j = 0; j < d; ++j) {
        MultiIndex e(n);
        e.set(blk * d + j, 1);
        row.add_term(e, matrices[blk](i, j));
      }
      lin.components.push_back(row);
    }
  }
  return compose_map(f, lin);
}

}  // namespace

MultiPoly group_act(const GroupElement& sigma, const MultiPoly& f) {
  if (static_cast<std::size_t>(sigma.matrix.rows()) != f.dim()) {
    throw Error(ErrorCode::dimension, "group element and polynomial dimensions differ");
  }
  return linear_substitution(f, {inverse_matrix(sigma.matrix)});
}

MixedSymbol group_act(const GroupElement& sigma, const MixedSymbol& u) {
  if (static_cast<std::size_t>(sigma.matrix.rows()) != u.dim()) {
    throw Error(ErrorCode::dimension, "group element and symbol dimensions differ");
  }
  CMatrix inv = inverse_matrix(sigma.matrix);
  return MixedSymbol(u.dim(), linear_substitution(u.joint(), {inv, inv.conjugate()}));
}

MultiPoly elementary_symmetric(std::size_t d, int k) {
  MultiPoly out(d);
  if (k < 0 || static_cast<std::size_t>(k) > d) return out;
  std::vector<bool> pick(d, false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    MultiIndex e(d);
    for (std::size_t i = 0; i < d; ++i)
      if (pick[i]) e.set(i, 1);
    out.add_term(e, 1.0);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

PolyMap basic_map(const ReflectionGroup& g) {
  PolyMap theta;
  const std::size_t d = g.dimension();
  if (g.kind() == GroupKind::symmetric) {
    for (std::size_t k = 1; k <= d; ++k) theta.components.push_back(elementary_symmetric(d, static_cast<int>(k)));
    return theta;
  }
  if (g.kind() == GroupKind::abelian_diagonal) {
    for (std::size_t i = 0; i < d; ++i) {
      MultiIndex e(d);
      e.set(i, g.orders()[i]);
      theta.components.push_back(MultiPoly::monomial(e));
    }
    return theta;
  }
  throw Error(ErrorCode::unsupported, "no basic polynomial map for custom groups");
}

std::vector<int> basic_degrees(const ReflectionGroup& g) {
  std::vector<int> out;
  for (const auto& c : basic_map(g).components) out.push_back(c.total_degree());
  return out;
}

int invariant_dimension(const ReflectionGroup& g, int n) {
  if (n < 0 || n > 20) throw Error(ErrorCode::domain, "invariant_dimension supports degrees 0..20");
  const auto monomials = homogeneous_indices(g.dimension(), n);
  std::map<MultiIndex, Eigen::Index> column;
  for (std::size_t k = 0; k < monomials.size(); ++k) column.emplace(monomials[k], static_cast<Eigen::Index>(k));

  const auto m = static_cast<Eigen::Index>(monomials.size());
  CMatrix rows = CMatrix::Zero(m, m);
  const double inv_order = 1.0 / static_cast<double>(g.order());
  for (Eigen::Index r = 0; r < m; ++r) {
    MultiPoly mono = MultiPoly::monomial(monomials[r]);
    MultiPoly avg(g.dimension());
    for (const auto& el : g.elements()) avg += group_act(el, mono);
    for (const auto& [e, c] : avg.terms()) rows(r, column.at(e)) = c * inv_order;
  }
  Eigen::FullPivLU<CMatrix> lu(rows);
  lu.setThreshold(1e-10);
  return static_cast<int>(lu.rank());
}

double invariance_residual(const ReflectionGroup& g, const MultiPoly& f) {
  double worst = 0.0;
  for (const auto& el : g.elements()) worst = std::max(worst, coeff_distance(group_act(el, f), f));
  return worst;
}

double invariance_residual(const ReflectionGroup& g, const MixedSymbol& u) {
  double worst = 0.0;
  for (const auto& el : g.elements()) worst = std::max(worst, coeff_distance(group_act(el, u), u));
  return worst;
}

}  // namespace qb
