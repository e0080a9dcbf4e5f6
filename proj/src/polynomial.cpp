#include "qb/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qb {

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::constant(std::size_t dim, cplx c) {
  MultiPoly p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

MultiPoly MultiPoly::variable(std::size_t dim, std::size_t i) {
  if (i >= dim) throw Error(ErrorCode::dimension, "variable index out of range");
  MultiIndex e(dim);
  e.set(i, 1);
  return monomial(e);
}

MultiPoly MultiPoly::monomial(const MultiIndex& exps, cplx c) {
  MultiPoly p(exps.size());
  p.add_term(exps, c);
  return p;
}

void MultiPoly::add_term(const MultiIndex& exps, cplx c) {
  if (exps.size() != dim_) throw Error(ErrorCode::dimension, "term dimension mismatch");
  auto [it, inserted] = terms_.try_emplace(exps, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kPruneThreshold) terms_.erase(it);
}

cplx MultiPoly::coeff(const MultiIndex& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? cplx{} : it->second;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.total_degree());
  return d;
}

int MultiPoly::max_exponent() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.max_exponent());
  return d;
}

const MultiIndex& MultiPoly::leading_index() const {
  if (terms_.empty()) throw Error(ErrorCode::domain, "zero polynomial has no leading term");
  return terms_.rbegin()->first;
}

double MultiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

cplx MultiPoly::evaluate(std::span<const cplx> z) const {
  if (z.size() != dim_) throw Error(ErrorCode::dimension, "evaluation point dimension mismatch");
  cplx sum{};
  for (const auto& [e, c] : terms_) {
    cplx term = c;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (int k = 0; k < e[i]; ++k) term *= z[i];
    }
    sum += term;
  }
  return sum;
}

MultiPoly MultiPoly::derivative(std::size_t var) const {
  MultiPoly out(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    MultiIndex f = e;
    f.set(var, e[var] - 1);
    out.add_term(f, c * static_cast<double>(e[var]));
  }
  return out;
}

MultiPoly MultiPoly::conj_coeffs() const {
  MultiPoly out(dim_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, std::conj(c));
  return out;
}

MultiPoly MultiPoly::homogeneous_part(int n) const {
  MultiPoly out(dim_);
  for (const auto& [e, c] : terms_)
    if (e.total_degree() == n) out.terms_.emplace(e, c);
  return out;
}

void MultiPoly::prune(double threshold) {
  std::erase_if(terms_, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::dimension, "polynomial dimension mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (other.dim_ != dim_) throw Error(ErrorCode::dimension, "polynomial dimension mismatch");
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(cplx s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.dim_ != b.dim_) throw Error(ErrorCode::dimension, "polynomial dimension mismatch");
  MultiPoly out(a.dim_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      auto [it, inserted] = out.terms_.try_emplace(ea + eb, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  out.prune();
  return out;
}

MultiPoly MultiPoly::pow(int k) const {
  MultiPoly result = constant(dim_, 1.0);
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

namespace {
std::string format_coeff(cplx c) {
  std::ostringstream os;
  os.precision(6);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
  }
  return os.str();
}

std::string format_monomial(const MultiIndex& e, std::size_t offset, std::size_t n,
                            const std::string& var) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    int k = e[offset + i];
    if (k == 0) continue;
    if (!s.empty()) s += "*";
    s += var + std::to_string(i + 1);
    if (k > 1) s += "^" + std::to_string(k);
  }
  return s;
}
}  // namespace

std::string MultiPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!s.empty()) s += " + ";
    std::string mono = format_monomial(it->first, 0, dim_, var);
    s += format_coeff(it->second);
    if (!mono.empty()) s += "*" + mono;
  }
  return s;
}

double coeff_distance(const MultiPoly& a, const MultiPoly& b) {
  return (a - b).max_abs_coeff();
}

// ---------------------------------------------------------------------------
// MixedSymbol

MixedSymbol::MixedSymbol(std::size_t dim, MultiPoly joint) : dim_(dim), poly_(std::move(joint)) {
  if (poly_.dim() != 2 * dim) throw Error(ErrorCode::dimension, "mixed symbol needs 2d variables");
}

MixedSymbol MixedSymbol::constant(std::size_t dim, cplx c) {
  return MixedSymbol(dim, MultiPoly::constant(2 * dim, c));
}

MixedSymbol MixedSymbol::holomorphic(const MultiPoly& f) {
  MixedSymbol u(f.dim());
  MultiIndex zero(f.dim());
  for (const auto& [e, c] : f.terms()) u.add_term(e, zero, c);
  return u;
}

MixedSymbol MixedSymbol::antiholomorphic(const MultiPoly& f) {
  MixedSymbol u(f.dim());
  MultiIndex zero(f.dim());
  for (const auto& [e, c] : f.terms()) u.add_term(zero, e, std::conj(c));
  return u;
}

MixedSymbol MixedSymbol::term(const MultiIndex& a, const MultiIndex& b, cplx c) {
  MixedSymbol u(a.size());
  u.add_term(a, b, c);
  return u;
}

void MixedSymbol::add_term(const MultiIndex& a, const MultiIndex& b, cplx c) {
  if (a.size() != dim_ || b.size() != dim_) throw Error(ErrorCode::dimension, "term dimension mismatch");
  poly_.add_term(MultiIndex::concat(a, b), c);
}

std::vector<MixedSymbol::Term> MixedSymbol::term_list() const {
  std::vector<Term> out;
  out.reserve(poly_.size());
  for (const auto& [e, c] : poly_.terms()) out.push_back({e.head(dim_), e.tail(dim_), c});
  return out;
}

bool MixedSymbol::is_holomorphic() const {
  for (const auto& [e, c] : poly_.terms())
    if (!e.tail(dim_).is_zero()) return false;
  return true;
}

bool MixedSymbol::is_antiholomorphic() const {
  for (const auto& [e, c] : poly_.terms())
    if (!e.head(dim_).is_zero()) return false;
  return true;
}

int MixedSymbol::band_margin() const { return poly_.max_exponent(); }

MultiPoly MixedSymbol::holomorphic_part(bool drop_constant) const {
  MultiPoly out(dim_);
  for (const auto& t : term_list()) {
    if (!t.b.is_zero()) continue;
    if (drop_constant && t.a.is_zero()) continue;
    out.add_term(t.a, t.c);
  }
  return out;
}

MultiPoly MixedSymbol::antiholomorphic_part_conj(bool drop_constant) const {
  MultiPoly out(dim_);
  for (const auto& t : term_list()) {
    if (!t.a.is_zero()) continue;
    if (drop_constant && t.b.is_zero()) continue;
    out.add_term(t.b, std::conj(t.c));
  }
  return out;
}

MixedSymbol MixedSymbol::conjugate() const {
  MixedSymbol out(dim_);
  for (const auto& t : term_list()) out.add_term(t.b, t.a, std::conj(t.c));
  return out;
}

cplx MixedSymbol::evaluate(std::span<const cplx> z) const {
  if (z.size() != dim_) throw Error(ErrorCode::dimension, "evaluation point dimension mismatch");
  Point joint(2 * dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    joint[i] = z[i];
    joint[dim_ + i] = std::conj(z[i]);
  }
  return poly_.evaluate(joint);
}

MixedSymbol MixedSymbol::mixed_partial(std::size_t k, std::size_t l) const {
  return MixedSymbol(dim_, poly_.derivative(k).derivative(dim_ + l));
}

bool MixedSymbol::is_pluriharmonic() const {
  for (std::size_t k = 0; k < dim_; ++k)
    for (std::size_t l = 0; l < dim_; ++l)
      if (!mixed_partial(k, l).is_zero()) return false;
  return true;
}

MixedSymbol& MixedSymbol::operator+=(const MixedSymbol& other) {
  poly_ += other.poly_;
  return *this;
}

MixedSymbol& MixedSymbol::operator-=(const MixedSymbol& other) {
  poly_ -= other.poly_;
  return *this;
}

MixedSymbol& MixedSymbol::operator*=(cplx s) {
  poly_ *= s;
  return *this;
}

MixedSymbol operator*(const MixedSymbol& a, const MixedSymbol& b) {
  if (a.dim_ != b.dim_) throw Error(ErrorCode::dimension, "symbol dimension mismatch");
  return MixedSymbol(a.dim_, a.poly_ * b.poly_);
}

std::string MixedSymbol::to_string() const {
  if (poly_.is_zero()) return "0";
  std::string s;
  const auto& terms = poly_.terms();
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    if (!s.empty()) s += " + ";
    s += format_coeff(it->second);
    std::string hol = format_monomial(it->first, 0, dim_, "z");
    std::string anti = format_monomial(it->first, dim_, dim_, "zb");
    if (!hol.empty()) s += "*" + hol;
    if (!anti.empty()) s += "*" + anti;
  }
  return s;
}

double coeff_distance(const MixedSymbol& a, const MixedSymbol& b) {
  return coeff_distance(a.joint(), b.joint());
}

// ---------------------------------------------------------------------------
// PolyMap and composition

Point PolyMap::evaluate(std::span<const cplx> z) const {
  Point out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.evaluate(z));
  return out;
}

PolyMap PolyMap::conj_coeffs() const {
  PolyMap out;
  for (const auto& c : components) out.components.push_back(c.conj_coeffs());
  return out;
}

MultiPoly compose_map(const MultiPoly& f, const PolyMap& theta) {
  if (f.dim() != theta.target_dim()) {
    throw Error(ErrorCode::dimension, "compose_map: polynomial arity differs from map components");
  }
  const std::size_t src = theta.source_dim();
  // powers[i][k] = theta_i^k
  std::vector<std::vector<MultiPoly>> powers(theta.target_dim());
  for (std::size_t i = 0; i < theta.target_dim(); ++i) {
    if (theta.components[i].dim() != src) throw Error(ErrorCode::dimension, "ragged polynomial map");
    powers[i].push_back(MultiPoly::constant(src, 1.0));
  }
  MultiPoly out(src);
  for (const auto& [e, c] : f.terms()) {
    MultiPoly term = MultiPoly::constant(src, c);
    for (std::size_t i = 0; i < theta.target_dim(); ++i) {
      while (static_cast<int>(powers[i].size()) <= e[i]) {
        powers[i].push_back(powers[i].back() * theta.components[i]);
      }
      if (e[i] > 0) term = term * powers[i][e[i]];
    }
    out += term;
  }
  return out;
}

MixedSymbol compose_map(const MixedSymbol& u, const PolyMap& theta) {
  const std::size_t d = theta.source_dim();
  PolyMap joint;
  for (const auto& c : theta.components) joint.components.push_back(MixedSymbol::holomorphic(c).joint());
  for (const auto& c : theta.components) joint.components.push_back(MixedSymbol::antiholomorphic(c).joint());
  return MixedSymbol(d, compose_map(u.joint(), joint));
}

MultiPoly jacobian_det(const PolyMap& theta) {
  const std::size_t d = theta.target_dim();
  if (d != theta.source_dim()) throw Error(ErrorCode::dimension, "jacobian_det needs a square map");
  std::vector<std::vector<MultiPoly>> jac(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) jac[i].push_back(theta.components[i].derivative(j));

  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  MultiPoly det(d);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) ++inversions;
    MultiPoly term = MultiPoly::constant(d, inversions % 2 ? -1.0 : 1.0);
    for (std::size_t i = 0; i < d && !term.is_zero(); ++i) term = term * jac[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const MultiPoly& f) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : f.terms()) {
    arr.push_back({{"exponents", e.to_vector()}, {"re", c.real()}, {"im", c.imag()}});
  }
  return arr;
}

nlohmann::json to_json(const MixedSymbol& u) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : u.term_list()) {
    arr.push_back({{"exponents", t.a.to_vector()},
                   {"conj_exponents", t.b.to_vector()},
                   {"re", t.c.real()},
                   {"im", t.c.imag()}});
  }
  return arr;
}

namespace {
MultiIndex index_from_json(const nlohmann::json& j, std::size_t dim) {
  auto v = j.get<std::vector<int>>();
  if (v.size() != dim) throw Error(ErrorCode::dimension, "exponent list has wrong length");
  return MultiIndex(std::span<const int>(v));
}

cplx coeff_from_json(const nlohmann::json& t) {
  return {t.value("re", 0.0), t.value("im", 0.0)};
}
}  // namespace

MultiPoly multipoly_from_json(const nlohmann::json& j, std::size_t dim) {
  if (!j.is_array()) throw Error(ErrorCode::usage, "polynomial JSON must be a list of terms");
  MultiPoly p(dim);
  for (const auto& t : j) p.add_term(index_from_json(t.at("exponents"), dim), coeff_from_json(t));
  return p;
}

MixedSymbol mixed_from_json(const nlohmann::json& j, std::size_t dim) {
  if (!j.is_array()) throw Error(ErrorCode::usage, "symbol JSON must be a list of terms");
  MixedSymbol u(dim);
  for (const auto& t : j) {
    MultiIndex a = index_from_json(t.at("exponents"), dim);
    MultiIndex b = t.contains("conj_exponents") ? index_from_json(t.at("conj_exponents"), dim)
                                                : MultiIndex(dim);
    u.add_term(a, b, coeff_from_json(t));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

class SymbolParser {
 public:
  SymbolParser(const std::string& text, std::size_t dim) : s_(text), dim_(dim) {}

  MixedSymbol parse() {
    MixedSymbol u = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return u;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::usage, "cannot parse symbol '" + s_ + "' at " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(const std::string& w) {
    skip();
    if (s_.compare(pos_, w.size(), w) == 0) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  int integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }

  MixedSymbol expr() {
    MixedSymbol u = term();
    for (;;) {
      if (eat('+')) u += term();
      else if (eat('-')) u -= term();
      else return u;
    }
  }
  MixedSymbol term() {
    MixedSymbol u = unary();
    while (eat('*')) u = u * unary();
    return u;
  }
  MixedSymbol unary() {
    if (eat('-')) return unary() * cplx(-1.0);
    if (eat('+')) return unary();
    return power();
  }
  MixedSymbol power() {
    MixedSymbol base = atom();
    if (!eat('^')) return base;
    int k = integer();
    MixedSymbol out = MixedSymbol::constant(dim_, 1.0);
    for (int i = 0; i < k; ++i) out = out * base;
    return out;
  }
  MixedSymbol variable(bool conjugated) {
    int k = integer();
    if (k < 1 || static_cast<std::size_t>(k) > dim_) fail("variable index out of range");
    MultiIndex e(dim_);
    e.set(static_cast<std::size_t>(k - 1), 1);
    MixedSymbol u(dim_);
    if (conjugated) u.add_term(MultiIndex(dim_), e, 1.0);
    else u.add_term(e, MultiIndex(dim_), 1.0);
    return u;
  }
  MixedSymbol atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      MixedSymbol u = expr();
      if (!eat(')')) fail("expected ')'");
      return u;
    }
    if (eat_word("conj")) {
      if (!eat('(')) fail("expected '(' after conj");
      MixedSymbol u = expr();
      if (!eat(')')) fail("expected ')'");
      return u.conjugate();
    }
    if (eat_word("zb")) return variable(true);
    if (eat('z')) return variable(false);
    if (eat('i')) return MixedSymbol::constant(dim_, cplx(0.0, 1.0));
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        return MixedSymbol::constant(dim_, cplx(0.0, v));
      }
      return MixedSymbol::constant(dim_, v);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t dim_;
  std::size_t pos_ = 0;
};

}  // namespace

MixedSymbol parse_symbol(const std::string& text, std::size_t dim) {
  return SymbolParser(text, dim).parse();
}

MultiPoly parse_polynomial(const std::string& text, std::size_t dim) {
  MixedSymbol u = parse_symbol(text, dim);
  if (!u.is_holomorphic()) throw Error(ErrorCode::usage, "'" + text + "' is not holomorphic");
  return u.holomorphic_part();
}

}  // namespace qb
