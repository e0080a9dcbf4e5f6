#include "qb/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace qb {

namespace mp = boost::multiprecision;

Weight Weight::polydisc(std::vector<double> alpha) {
  if (alpha.empty()) throw Error(ErrorCode::dimension, "polydisc weight needs at least one coordinate");
  for (double a : alpha)
    if (!(a > -1.0)) throw Error(ErrorCode::domain, "weight exponents must exceed -1");
  Weight w;
  w.domain = DomainKind::polydisc;
  w.dim = alpha.size();
  w.alpha = std::move(alpha);
  return w;
}

Weight Weight::ball(std::size_t d) {
  if (d == 0) throw Error(ErrorCode::dimension, "ball dimension must be positive");
  Weight w;
  w.domain = DomainKind::ball;
  w.dim = d;
  return w;
}

bool Weight::integer_alpha() const {
  return std::all_of(alpha.begin(), alpha.end(), [](double a) { return a == std::floor(a) && a < 1e6; });
}

bool Weight::contains(std::span<const cplx> z) const {
  if (z.size() != dim) return false;
  if (domain == DomainKind::ball) {
    double s = 0.0;
    for (auto v : z) s += std::norm(v);
    return s < 1.0;
  }
  return std::all_of(z.begin(), z.end(), [](cplx v) { return std::norm(v) < 1.0; });
}

double Weight::density(std::span<const cplx> z) const {
  if (!contains(z)) return 0.0;
  if (domain == DomainKind::ball) return 1.0;
  double out = 1.0;
  for (std::size_t i = 0; i < dim; ++i) out *= (alpha[i] + 1.0) * std::pow(1.0 - std::norm(z[i]), alpha[i]);
  return out;
}

std::string Weight::label() const {
  std::ostringstream os;
  if (domain == DomainKind::ball) {
    os << "B_" << dim;
    return os.str();
  }
  os << "D^" << dim << " alpha=(";
  for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
  os << ")";
  return os.str();
}

namespace {

mp::cpp_int factorial(int n) {
  mp::cpp_int f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

mp::cpp_int binomial(int n, int k) {
  mp::cpp_int b = 1;
  for (int j = 1; j <= k; ++j) {
    b *= n - k + j;
    b /= j;
  }
  return b;
}

}  // namespace

double monomial_norm_sq(const MultiIndex& n, const Weight& w) {
  if (n.size() != w.dim) throw Error(ErrorCode::dimension, "multi-index and weight dimensions differ");
  if (w.domain == DomainKind::ball) {
    mp::cpp_int num = factorial(static_cast<int>(w.dim));
    for (std::size_t i = 0; i < n.size(); ++i) num *= factorial(n[i]);
    mp::cpp_rational q(num, factorial(static_cast<int>(w.dim) + n.total_degree()));
    return q.convert_to<double>();
  }
  if (w.integer_alpha()) {
    // (alpha+1) Beta(n+1, alpha+1) = 1 / C(n+alpha+1, n)
    mp::cpp_int den = 1;
    for (std::size_t i = 0; i < n.size(); ++i) den *= binomial(n[i] + static_cast<int>(w.alpha[i]) + 1, n[i]);
    mp::cpp_rational q(mp::cpp_int(1), den);
    return q.convert_to<double>();
  }
  double log_norm = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double a = w.alpha[i];
    log_norm += std::lgamma(n[i] + 1.0) + std::lgamma(a + 2.0) - std::lgamma(n[i] + a + 2.0);
  }
  return std::exp(log_norm);
}

double MonomialNorms::norm_sq(const MultiIndex& n) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
  }
  const double v = monomial_norm_sq(n, weight_);
  std::lock_guard lock(mutex_);
  cache_.emplace(n, v);
  return v;
}

double MonomialNorms::norm(const MultiIndex& n) const { return std::sqrt(norm_sq(n)); }

cplx inner_product(const MultiPoly& f, const MultiPoly& g, const MonomialNorms& norms) {
  const auto& small = f.size() <= g.size() ? f.terms() : g.terms();
  const auto& large = f.size() <= g.size() ? g.terms() : f.terms();
  cplx s{};
  for (const auto& [e, c] : small) {
    auto it = large.find(e);
    if (it == large.end()) continue;
    const cplx fc = f.size() <= g.size() ? c : it->second;
    const cplx gc = f.size() <= g.size() ? it->second : c;
    s += fc * std::conj(gc) * norms.norm_sq(e);
  }
  return s;
}

cplx symbol_inner_product(const MixedSymbol& u, const MultiPoly& f, const MultiPoly& g,
                          const MonomialNorms& norms) {
  // <z^a conj(z)^b z^k, z^l> = ||z^{k+a}||^2 when l = k + a - b
  cplx s{};
  for (const auto& t : u.term_list()) {
    for (const auto& [k, fc] : f.terms()) {
      const MultiIndex up = k + t.a;
      if (!t.b.divides(up)) continue;
      const cplx gc = g.coeff(up - t.b);
      if (gc == cplx{}) continue;
      s += t.c * fc * std::conj(gc) * norms.norm_sq(up);
    }
  }
  return s;
}

namespace {
void check_point(const Weight& w, std::span<const cplx> z, const char* what) {
  if (z.size() != w.dim) throw Error(ErrorCode::dimension, std::string(what) + " has the wrong dimension");
  if (!w.contains(z)) throw Error(ErrorCode::domain, std::string(what) + " is not inside the domain");
}
}  // namespace

cplx kernel_eval(const Weight& w, std::span<const cplx> z, std::span<const cplx> y) {
  check_point(w, z, "z");
  check_point(w, y, "y");
  if (w.domain == DomainKind::ball) {
    cplx ip{};
    for (std::size_t i = 0; i < w.dim; ++i) ip += z[i] * std::conj(y[i]);
    return std::pow(1.0 - ip, -static_cast<double>(w.dim + 1));
  }
  cplx out = 1.0;
  for (std::size_t i = 0; i < w.dim; ++i) out *= std::pow(1.0 - z[i] * std::conj(y[i]), -(w.alpha[i] + 2.0));
  return out;
}

cplx kernel_series(const Weight& w, std::span<const cplx> z, std::span<const cplx> y, int n) {
  check_point(w, z, "z");
  check_point(w, y, "y");
  MonomialNorms norms(w);
  std::vector<MultiIndex> idx;
  if (w.domain == DomainKind::ball) {
    for (int k = 0; k <= n; ++k) {
      auto level = homogeneous_indices(w.dim, k);
      idx.insert(idx.end(), level.begin(), level.end());
    }
  } else {
    idx = box_indices(w.dim, n);
  }
  cplx s{};
  for (const auto& e : idx) {
    cplx term = 1.0 / norms.norm_sq(e);
    for (std::size_t i = 0; i < w.dim; ++i)
      for (int k = 0; k < e[i]; ++k) term *= z[i] * std::conj(y[i]);
    s += term;
  }
  return s;
}

cplx kernel_pairing(const MultiPoly& p, const Weight& w, std::span<const cplx> y) {
  check_point(w, y, "y");
  MonomialNorms norms(w);
  MultiPoly ky(w.dim);
  for (const auto& [e, c] : p.terms()) {
    cplx yn = 1.0;
    for (std::size_t i = 0; i < w.dim; ++i)
      for (int k = 0; k < e[i]; ++k) yn *= y[i];
    ky.add_term(e, std::conj(yn) / norms.norm_sq(e));
  }
  return inner_product(p, ky, norms);
}

std::vector<std::size_t> TruncatedOperator::interior(int margin) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < extent.size(); ++i)
    if (extent[i] <= truncation - margin) out.push_back(i);
  return out;
}

std::string TruncatedOperator::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
      if (matrix(r, c) != cplx{}) os << r << ',' << c << ',' << matrix(r, c).real() << ',' << matrix(r, c).imag() << '\n';
  return os.str();
}

nlohmann::json TruncatedOperator::to_json() const {
  nlohmann::json j;
  j["size"] = size();
  j["truncation"] = truncation;
  j["band_margin"] = band_margin;
  j["index_map"] = nlohmann::json::array();
  for (const auto& e : index_map) j["index_map"].push_back(e.to_vector());
  j["extent"] = extent;
  j["entries"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < matrix.cols(); ++c)
      if (matrix(r, c) != cplx{}) j["entries"].push_back({r, c, matrix(r, c).real(), matrix(r, c).imag()});
  return j;
}

TruncatedOperator toeplitz_matrix(const MixedSymbol& u, const Weight& w, int n) {
  if (u.dim() != w.dim) throw Error(ErrorCode::dimension, "symbol and weight dimensions differ");
  if (n < 0) throw Error(ErrorCode::domain, "truncation must be non-negative");
  if (u.max_exponent() > n) {
    throw Error(ErrorCode::truncation, "symbol exponent " + std::to_string(u.max_exponent()) +
                                           " exceeds truncation " + std::to_string(n));
  }
  MonomialNorms norms(w);
  TruncatedOperator op;
  op.index_map = box_indices(w.dim, n);
  op.truncation = n;
  op.band_margin = u.band_margin();
  std::map<MultiIndex, Eigen::Index> position;
  for (std::size_t i = 0; i < op.index_map.size(); ++i) {
    position.emplace(op.index_map[i], static_cast<Eigen::Index>(i));
    op.extent.push_back(op.index_map[i].max_exponent());
  }
  const auto size = static_cast<Eigen::Index>(op.index_map.size());
  op.matrix = CMatrix::Zero(size, size);
  const auto terms = u.term_list();
  for (Eigen::Index col = 0; col < size; ++col) {
    const MultiIndex& m = op.index_map[static_cast<std::size_t>(col)];
    for (const auto& t : terms) {
      const MultiIndex up = m + t.a;
      if (!t.b.divides(up)) continue;
      const MultiIndex target = up - t.b;
      if (target.max_exponent() > n) continue;
      const double scale = target == m ? norms.norm_sq(m) : norms.norm(m) * norms.norm(target);
      op.matrix(position.at(target), col) += t.c * norms.norm_sq(up) / scale;
    }
  }
  return op;
}

namespace {
TruncatedOperator restrict_to(const TruncatedOperator& a, const CMatrix& full, const std::vector<std::size_t>& keep,
                              int band) {
  TruncatedOperator out;
  out.truncation = a.truncation;
  out.band_margin = band;
  const auto k = static_cast<Eigen::Index>(keep.size());
  out.matrix.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.index_map.push_back(a.index_map[keep[static_cast<std::size_t>(i)]]);
    out.extent.push_back(a.extent[keep[static_cast<std::size_t>(i)]]);
    for (Eigen::Index j = 0; j < k; ++j)
      out.matrix(i, j) = full(static_cast<Eigen::Index>(keep[static_cast<std::size_t>(i)]),
                              static_cast<Eigen::Index>(keep[static_cast<std::size_t>(j)]));
  }
  return out;
}
}  // namespace

TruncatedOperator interior_block(const TruncatedOperator& a, int margin) {
  if (margin < 0) throw Error(ErrorCode::margin, "negative interior margin");
  return restrict_to(a, a.matrix, a.interior(margin), a.band_margin);
}

TruncatedOperator op_product_interior(const TruncatedOperator& a, const TruncatedOperator& b, int margin) {
  if (a.index_map != b.index_map || a.truncation != b.truncation) {
    throw Error(ErrorCode::dimension, "operators live on different truncated bases");
  }
  if (margin < a.band_margin + b.band_margin) {
    throw Error(ErrorCode::margin, "margin " + std::to_string(margin) + " is below the combined band width " +
                                       std::to_string(a.band_margin + b.band_margin));
  }
  CMatrix prod = a.matrix * b.matrix;
  return restrict_to(a, prod, a.interior(margin), a.band_margin + b.band_margin);
}

ResidualNorms residual(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorCode::dimension, "residual of mismatched matrices");
  if (a.size() == 0) return {};
  CMatrix diff = a - b;
  return {diff.cwiseAbs().maxCoeff(), diff.norm()};
}

double projection_identity_residual(const MultiPoly& g, const Weight& w, std::span<const cplx> y, int n) {
  check_point(w, y, "y");
  const TruncatedOperator t = toeplitz_matrix(MixedSymbol::antiholomorphic(g), w, n);
  MonomialNorms norms(w);
  CVector k(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const MultiIndex& e = t.index_map[i];
    cplx yn = 1.0;
    for (std::size_t v = 0; v < w.dim; ++v)
      for (int p = 0; p < e[v]; ++p) yn *= y[v];
    k(static_cast<Eigen::Index>(i)) = std::conj(yn) / norms.norm(e);
  }
  const cplx gy = g.evaluate(y);
  return (t.matrix * k - std::conj(gy) * k).norm();
}

}  // namespace qb
