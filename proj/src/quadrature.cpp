#include "qb/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "qb/parallel.hpp"

namespace qb {

namespace {

constexpr std::size_t kPartitions = 64;
constexpr std::size_t kGramChunk = 2048;

/// Contiguous range of partition p out of kPartitions over [0, n).
std::pair<std::size_t, std::size_t> partition_range(std::size_t n, std::size_t p) {
  return {n * p / kPartitions, n * (p + 1) / kPartitions};
}

}  // namespace

GaussRule gauss_jacobi_unit(int n, double a) {
  if (n < 1) throw Error(ErrorCode::domain, "quadrature order must be positive");
  if (!(a > -1.0)) throw Error(ErrorCode::domain, "Jacobi exponent must exceed -1");
  // Golub-Welsch for (1-x)^a on [-1, 1], then t = (1+x)/2.
  const double b = 0.0;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    jac(k, k) = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double sm = 2.0 * m + a + b;
      const double beta = 4.0 * m * (m + a) * (m + b) * (m + a + b) / (sm * sm * (sm + 1.0) * (sm - 1.0));
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  const double to_unit = std::pow(2.0, -a - 1.0);
  GaussRule rule;
  for (int k = 0; k < n; ++k) {
    const double v0 = es.eigenvectors()(0, k);
    rule.nodes.push_back(0.5 * (1.0 + es.eigenvalues()(k)));
    rule.weights.push_back(mu0 * v0 * v0 * to_unit);
  }
  return rule;
}

QuadratureRule::QuadratureRule(const Weight& w, QuadratureOrders orders) : weight_(w), orders_(orders) {
  if (orders.radial < 1 || orders.angular < 1) throw Error(ErrorCode::domain, "quadrature orders must be positive");
  const std::size_t d = w.dim;
  const auto ra = static_cast<std::size_t>(orders.radial) * static_cast<std::size_t>(orders.angular);
  auto angle = [&](std::size_t coord, int j) {
    return 2.0 * kPi * (j + static_cast<double>(coord) / static_cast<double>(d)) / orders.angular;
  };
  if (w.domain == DomainKind::polydisc) {
    for (std::size_t k = 0; k < d; ++k) {
      const GaussRule g = gauss_jacobi_unit(orders.radial, w.alpha[k]);
      std::vector<cplx> pts;
      std::vector<double> wts;
      pts.reserve(ra);
      wts.reserve(ra);
      for (int r = 0; r < orders.radial; ++r) {
        const double rad = std::sqrt(g.nodes[static_cast<std::size_t>(r)]);
        const double wt = (w.alpha[k] + 1.0) * g.weights[static_cast<std::size_t>(r)] / orders.angular;
        for (int j = 0; j < orders.angular; ++j) {
          pts.push_back(std::polar(rad, angle(k, j)));
          wts.push_back(wt);
        }
      }
      points_.push_back(std::move(pts));
      point_weights_.push_back(std::move(wts));
      size_ *= ra;
    }
  } else {
    legendre_ = gauss_jacobi_unit(orders.radial, 0.0);
    for (std::size_t k = 0; k < d; ++k)
      for (int j = 0; j < orders.angular; ++j) phases_.push_back(std::polar(1.0, angle(k, j)));
    for (std::size_t k = 0; k < d; ++k) size_ *= ra;
  }
}

double QuadratureRule::node(std::size_t flat, std::span<cplx> z) const {
  const std::size_t d = weight_.dim;
  if (weight_.domain == DomainKind::polydisc) {
    double wt = 1.0;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t base = points_[k].size();
      const std::size_t local = flat % base;
      flat /= base;
      z[k] = points_[k][local];
      wt *= point_weights_[k][local];
    }
    return wt;
  }
  const auto na = static_cast<std::size_t>(orders_.angular);
  const auto nr = static_cast<std::size_t>(orders_.radial);
  std::array<std::size_t, MultiIndex::kCapacity> ang{}, rad{};
  for (std::size_t k = d; k-- > 0;) {
    ang[k] = flat % na;
    flat /= na;
  }
  for (std::size_t k = d; k-- > 0;) {
    rad[k] = flat % nr;
    flat /= nr;
  }
  // collapsed coordinates t_k = s_k prod_{j<k} (1 - s_j)
  double rest = 1.0, wt = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double s = legendre_.nodes[rad[k]];
    const double t = s * rest;
    wt *= legendre_.weights[rad[k]] * rest;
    rest *= 1.0 - s;
    z[k] = std::sqrt(t) * phases_[k * na + ang[k]];
  }
  double fact = 1.0;
  for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<double>(k);
  return fact * wt * std::pow(static_cast<double>(na), -static_cast<double>(d));
}

cplx quadrature_sum(const QuadratureRule& rule, const SampledFunction& f) {
  std::vector<cplx> partial(kPartitions);
  parallel_for(kPartitions, [&](std::size_t p) {
    auto [lo, hi] = partition_range(rule.size(), p);
    Point z(rule.weight().dim);
    cplx s{};
    for (std::size_t i = lo; i < hi; ++i) {
      const double wt = rule.node(i, z);
      s += wt * f(z);
    }
    partial[p] = s;
  });
  cplx total{};
  for (const auto& s : partial) total += s;
  return total;
}

QuadratureResult quadrature_integral(const SampledFunction& f, const Weight& w, QuadratureOrders orders) {
  QuadratureResult out;
  out.value = quadrature_sum(QuadratureRule(w, orders), f);
  const cplx coarse = quadrature_sum(QuadratureRule(w, orders.halved()), f);
  out.error_estimate = std::abs(out.value - coarse);
  out.warning = out.error_estimate > kQuadratureWarnTol;
  return out;
}

namespace {

void require_polydisc_point(const Weight& w, std::span<const cplx> z) {
  if (w.domain != DomainKind::polydisc) throw Error(ErrorCode::unsupported, "Berezin transform is implemented on the polydisc");
  if (z.size() != w.dim) throw Error(ErrorCode::dimension, "point has the wrong dimension");
  if (!w.contains(z)) throw Error(ErrorCode::domain, "Berezin transform needs an interior point");
}

/// (1-|z|^2)^{alpha+2} / |1 - z conj(w)|^{4+2 alpha}; with omega_alpha(w) dV this is the Berezin kernel.
double berezin_factor(cplx z, cplx w, double alpha) {
  return std::pow(1.0 - std::norm(z), alpha + 2.0) / std::pow(std::norm(1.0 - z * std::conj(w)), alpha + 2.0);
}

cplx berezin_symbol_at(const Weight& w, const MixedSymbol& f, std::span<const cplx> z, QuadratureOrders orders) {
  const std::size_t d = w.dim;
  std::vector<QuadratureRule> rules;
  for (std::size_t k = 0; k < d; ++k) rules.emplace_back(Weight::polydisc({w.alpha[k]}), orders);
  // per coordinate, integral of w^a conj(w)^b against the Berezin kernel
  std::vector<std::map<std::pair<int, int>, cplx>> cache(d);
  auto factor = [&](std::size_t k, int a, int b) {
    auto key = std::make_pair(a, b);
    auto it = cache[k].find(key);
    if (it != cache[k].end()) return it->second;
    const cplx zk = z[k];
    const double al = w.alpha[k];
    cplx v = quadrature_sum(rules[k], [&](std::span<const cplx> p) {
      return std::pow(p[0], a) * std::pow(std::conj(p[0]), b) * berezin_factor(zk, p[0], al);
    });
    cache[k].emplace(key, v);
    return v;
  };
  cplx total{};
  for (const auto& t : f.term_list()) {
    cplx term = t.c;
    for (std::size_t k = 0; k < d; ++k) term *= factor(k, t.a[k], t.b[k]);
    total += term;
  }
  return total;
}

}  // namespace

QuadratureResult berezin(const Weight& w, const MixedSymbol& f, std::span<const cplx> z, QuadratureOrders orders) {
  require_polydisc_point(w, z);
  if (f.dim() != w.dim) throw Error(ErrorCode::dimension, "symbol and weight dimensions differ");
  QuadratureResult out;
  out.value = berezin_symbol_at(w, f, z, orders);
  out.error_estimate = std::abs(out.value - berezin_symbol_at(w, f, z, orders.halved()));
  out.warning = out.error_estimate > kQuadratureWarnTol;
  return out;
}

QuadratureResult berezin(const Weight& w, const SampledFunction& f, std::span<const cplx> z, QuadratureOrders orders) {
  require_polydisc_point(w, z);
  Point zc(z.begin(), z.end());
  SampledFunction integrand = [&](std::span<const cplx> p) {
    double k = 1.0;
    for (std::size_t i = 0; i < zc.size(); ++i) k *= berezin_factor(zc[i], p[i], w.alpha[i]);
    return k * f(p);
  };
  return quadrature_integral(integrand, w, orders);
}

Point moebius(std::span<const cplx> a, std::span<const cplx> w) {
  if (a.size() != w.size()) throw Error(ErrorCode::dimension, "Moebius map dimensions differ");
  Point out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = (a[j] - w[j]) / (1.0 - std::conj(a[j]) * w[j]);
  return out;
}

SampledFunction moebius_conjugate(SampledFunction u, Point a) {
  for (auto v : a)
    if (std::norm(v) >= 1.0) throw Error(ErrorCode::domain, "Moebius parameter must be interior");
  return [u = std::move(u), a = std::move(a)](std::span<const cplx> w) {
    const Point p = moebius(a, w);
    return u(p);
  };
}

SampledFunction moebius_conjugate(const MixedSymbol& u, Point a) {
  return moebius_conjugate([u](std::span<const cplx> p) { return u.evaluate(p); }, std::move(a));
}

SampledFunction moebius_unitary(SampledFunction f, Point a, const Weight& w) {
  if (w.domain != DomainKind::polydisc || a.size() != w.dim) {
    throw Error(ErrorCode::dimension, "Moebius unitary needs a polydisc weight of matching dimension");
  }
  for (auto v : a)
    if (std::norm(v) >= 1.0) throw Error(ErrorCode::domain, "Moebius parameter must be interior");
  return [f = std::move(f), a = std::move(a), alpha = w.alpha](std::span<const cplx> p) {
    cplx jac = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const cplx base = std::sqrt(1.0 - std::norm(a[j])) / (1.0 - std::conj(a[j]) * p[j]);
      jac *= std::pow(base, alpha[j] + 2.0);
    }
    return f(moebius(a, p)) * jac;
  };
}

CMatrix quadrature_gram(const QuadratureRule& rule, std::size_t nbasis,
                        const std::function<void(std::span<const cplx>, std::span<cplx>)>& basis,
                        const SampledFunction& multiplier) {
  const auto nb = static_cast<Eigen::Index>(nbasis);
  std::vector<CMatrix> partial(kPartitions);
  parallel_for(kPartitions, [&](std::size_t p) {
    auto [lo, hi] = partition_range(rule.size(), p);
    CMatrix acc = CMatrix::Zero(nb, nb);
    Point z(rule.weight().dim);
    for (std::size_t start = lo; start < hi; start += kGramChunk) {
      const std::size_t stop = std::min(hi, start + kGramChunk);
      const auto rows = static_cast<Eigen::Index>(stop - start);
      CMatrix f(rows, nb);
      CVector s(rows);
      std::vector<cplx> vals(nbasis);
      for (std::size_t i = start; i < stop; ++i) {
        const double wt = rule.node(i, z);
        basis(z, vals);
        const auto r = static_cast<Eigen::Index>(i - start);
        for (Eigen::Index j = 0; j < nb; ++j) f(r, j) = vals[static_cast<std::size_t>(j)];
        s(r) = wt * multiplier(z);
      }
      acc.noalias() += f.adjoint() * (s.asDiagonal() * f);
    }
    partial[p] = std::move(acc);
  });
  CMatrix total = CMatrix::Zero(nb, nb);
  for (const auto& m : partial) total += m;
  return total;
}

TruncatedOperator toeplitz_quadrature(const SampledFunction& u, const Weight& w, int n, QuadratureOrders orders,
                                      int band_margin) {
  if (w.domain != DomainKind::polydisc) throw Error(ErrorCode::unsupported, "quadrature Toeplitz matrices are on the polydisc");
  TruncatedOperator op;
  op.index_map = box_indices(w.dim, n);
  op.truncation = n;
  op.band_margin = band_margin;
  for (const auto& e : op.index_map) op.extent.push_back(e.max_exponent());
  const auto& idx = op.index_map;
  const std::size_t d = w.dim;
  auto basis = [&](std::span<const cplx> z, std::span<cplx> out) {
    std::vector<std::vector<cplx>> powers(d, std::vector<cplx>(static_cast<std::size_t>(n) + 1));
    for (std::size_t k = 0; k < d; ++k) {
      powers[k][0] = 1.0;
      for (int p = 1; p <= n; ++p) powers[k][static_cast<std::size_t>(p)] = powers[k][static_cast<std::size_t>(p) - 1] * z[k];
    }
    for (std::size_t j = 0; j < idx.size(); ++j) {
      cplx v = 1.0;
      for (std::size_t k = 0; k < d; ++k) v *= powers[k][static_cast<std::size_t>(idx[j][k])];
      out[j] = v;
    }
  };
  const QuadratureRule rule(w, orders);
  // (n, m) entry = <u e_m, e_n>: row index is the conjugated factor
  const CMatrix g = quadrature_gram(rule, idx.size(), basis, u);
  const CMatrix unit = quadrature_gram(rule, idx.size(), basis, [](std::span<const cplx>) { return cplx{1.0}; });
  const auto size = static_cast<Eigen::Index>(idx.size());
  op.matrix.resize(size, size);
  for (Eigen::Index r = 0; r < size; ++r)
    for (Eigen::Index c = 0; c < size; ++c)
      op.matrix(r, c) = g(r, c) / std::sqrt(unit(r, r).real() * unit(c, c).real());
  return op;
}

}  // namespace qb
