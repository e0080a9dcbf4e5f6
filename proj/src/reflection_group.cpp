#include "qb/reflection_group.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace qb {

namespace {

int lcm_int(int a, int b) { return a / std::gcd(a, b) * b; }

int matrix_order(const CMatrix& m, std::size_t bound) {
  const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
  CMatrix p = m;
  for (std::size_t k = 1; k <= bound; ++k) {
    if ((p - id).cwiseAbs().maxCoeff() < kElementTolerance * 10) return static_cast<int>(k);
    p = p * m;
  }
  throw Error(ErrorCode::size, "element has no finite order within the enumeration bound");
}

}  // namespace

const char* to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::symmetric: return "symmetric";
    case GroupKind::abelian_diagonal: return "abelian_diagonal";
    case GroupKind::custom: return "custom";
  }
  return "custom";
}

Point GroupElement::apply(std::span<const cplx> z) const {
  Point out(z.size());
  if (permutation) {
    for (std::size_t j = 0; j < z.size(); ++j) out[(*permutation)[j]] = z[j];
    return out;
  }
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    cplx s{};
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) s += matrix(i, j) * z[j];
    out[i] = s;
  }
  return out;
}

bool GroupElement::approx_equal(const CMatrix& other, double tol) const {
  return matrix.rows() == other.rows() && (matrix - other).cwiseAbs().maxCoeff() <= tol;
}

MultiPoly Hyperplane::as_polynomial() const {
  const std::size_t d = linear_form.size();
  MultiPoly p(d);
  for (std::size_t j = 0; j < d; ++j) {
    MultiIndex e(d);
    e.set(j, 1);
    p.add_term(e, linear_form[j]);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Construction

ReflectionGroup ReflectionGroup::symmetric(int d) {
  if (d < 2 || d > 6) throw Error(ErrorCode::size, "symmetric group degree must be in [2, 6]");
  ReflectionGroup g;
  g.dim_ = static_cast<std::size_t>(d);
  g.kind_ = GroupKind::symmetric;
  std::vector<int> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    GroupElement el;
    el.matrix = CMatrix::Zero(d, d);
    for (int j = 0; j < d; ++j) el.matrix(perm[j], j) = 1.0;
    el.permutation = perm;
    // order = lcm of cycle lengths
    std::vector<bool> seen(d, false);
    int ord = 1;
    for (int s = 0; s < d; ++s) {
      if (seen[s]) continue;
      int len = 0;
      for (int c = s; !seen[c]; c = perm[c]) {
        seen[c] = true;
        ++len;
      }
      ord = lcm_int(ord, len);
    }
    el.order = ord;
    g.elements_.push_back(std::move(el));
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (int i = 0; i + 1 < d; ++i) {
    std::vector<int> t(d);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[i], t[i + 1]);
    for (std::size_t k = 0; k < g.elements_.size(); ++k)
      if (*g.elements_[k].permutation == t) g.generators_.push_back(k);
  }
  g.finalize();
  return g;
}

ReflectionGroup ReflectionGroup::cyclic_diagonal(const std::vector<int>& orders, std::size_t max_order) {
  if (orders.empty()) throw Error(ErrorCode::dimension, "need at least one cyclic factor");
  if (orders.size() > MultiIndex::kCapacity / 2) throw Error(ErrorCode::dimension, "dimension exceeds 6");
  std::size_t total = 1;
  for (int n : orders) {
    if (n < 1) throw Error(ErrorCode::domain, "cyclic orders must be positive");
    total *= static_cast<std::size_t>(n);
    if (total > max_order) throw Error(ErrorCode::size, "group order exceeds the enumeration bound");
  }
  ReflectionGroup g;
  g.dim_ = orders.size();
  g.kind_ = GroupKind::abelian_diagonal;
  g.orders_ = orders;
  const std::size_t d = orders.size();
  std::vector<int> k(d, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    // first coordinate slowest
    std::size_t rest = flat;
    for (std::size_t i = d; i-- > 0;) {
      k[i] = static_cast<int>(rest % static_cast<std::size_t>(orders[i]));
      rest /= static_cast<std::size_t>(orders[i]);
    }
    GroupElement el;
    el.matrix = CMatrix::Zero(d, d);
    int ord = 1;
    for (std::size_t i = 0; i < d; ++i) {
      el.matrix(i, i) = root_of_unity(k[i], orders[i]);
      ord = lcm_int(ord, orders[i] / std::gcd(k[i], orders[i]));
    }
    el.order = ord;
    g.elements_.push_back(std::move(el));
  }
  // generator of the i-th factor: k = e_i
  std::size_t stride = total;
  for (std::size_t i = 0; i < d; ++i) {
    stride /= static_cast<std::size_t>(orders[i]);
    if (orders[i] > 1) g.generators_.push_back(stride);
  }
  g.finalize();
  return g;
}

ReflectionGroup ReflectionGroup::from_generators(const std::vector<CMatrix>& generators,
                                                 std::size_t max_order) {
  if (generators.empty()) throw Error(ErrorCode::domain, "need at least one generator");
  const Eigen::Index d = generators.front().rows();
  for (const auto& m : generators) {
    if (m.rows() != d || m.cols() != d) throw Error(ErrorCode::dimension, "generators must be square of equal size");
    if (std::abs(m.determinant()) < 1e-12) throw Error(ErrorCode::domain, "generator is singular");
  }
  ReflectionGroup g;
  g.dim_ = static_cast<std::size_t>(d);
  g.kind_ = GroupKind::custom;

  auto intern = [&](const CMatrix& m) -> std::pair<std::size_t, bool> {
    auto key = key_of(m);
    if (auto it = g.lookup_.find(key); it != g.lookup_.end()) return {it->second, false};
    for (std::size_t i = 0; i < g.elements_.size(); ++i)
      if (g.elements_[i].approx_equal(m, 1e-9)) return {i, false};
    if (g.elements_.size() >= max_order) throw Error(ErrorCode::size, "group order exceeds the enumeration bound");
    GroupElement el;
    el.matrix = m;
    g.elements_.push_back(el);
    g.lookup_.emplace(key, g.elements_.size() - 1);
    return {g.elements_.size() - 1, true};
  };

  intern(CMatrix::Identity(d, d));
  for (const auto& m : generators) g.generators_.push_back(intern(m).first);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < g.elements_.size(); ++i) queue.push_back(i);
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (const auto& m : generators) {
      auto [idx, fresh] = intern(m * g.elements_[i].matrix);
      if (fresh) queue.push_back(idx);
    }
  }
  for (auto& el : g.elements_) el.order = matrix_order(el.matrix, g.elements_.size());
  g.finalize();
  return g;
}

std::vector<long long> ReflectionGroup::key_of(const CMatrix& m) {
  std::vector<long long> key;
  key.reserve(static_cast<std::size_t>(2 * m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      key.push_back(std::llround(m(i, j).real() * 1e8));
      key.push_back(std::llround(m(i, j).imag() * 1e8));
    }
  }
  return key;
}

void ReflectionGroup::finalize() {
  lookup_.clear();
  for (std::size_t i = 0; i < elements_.size(); ++i) lookup_.emplace(key_of(elements_[i].matrix), i);
  auto id = find(CMatrix::Identity(dim_, dim_));
  if (!id) throw Error(ErrorCode::internal, "identity missing from group");
  identity_ = *id;
  inverse_.resize(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    auto inv = find(elements_[i].matrix.inverse());
    if (!inv) throw Error(ErrorCode::internal, "group not closed under inverses");
    inverse_[i] = *inv;
  }
  compute_hyperplanes();
}

std::optional<std::size_t> ReflectionGroup::find(const CMatrix& m) const {
  if (auto it = lookup_.find(key_of(m)); it != lookup_.end()) {
    if (elements_[it->second].approx_equal(m, 1e-9)) return it->second;
  }
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].approx_equal(m, 1e-9)) return i;
  return std::nullopt;
}

std::size_t ReflectionGroup::product_index(std::size_t i, std::size_t j) const {
  auto k = find(elements_[i].matrix * elements_[j].matrix);
  if (!k) throw Error(ErrorCode::internal, "group not closed under multiplication");
  return *k;
}

void ReflectionGroup::compute_hyperplanes() {
  hyperplanes_.clear();
  struct Pending {
    std::vector<cplx> form;
    std::vector<std::size_t> members;
  };
  std::vector<Pending> found;
  const CMatrix id = CMatrix::Identity(dim_, dim_);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (k == identity_) continue;
    CMatrix a = id - elements_[k].matrix;
    Eigen::JacobiSVD<CMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s(0) < 1e-9 || (s.size() > 1 && s(1) > 1e-9)) continue;  // not rank one
    Eigen::Index best = 0;
    double best_norm = 0.0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      double n = a.row(r).norm();
      if (n > best_norm * (1 + 1e-12)) {
        best_norm = n;
        best = r;
      }
    }
    std::vector<cplx> form(dim_);
    cplx lead{};
    for (std::size_t j = 0; j < dim_; ++j) {
      if (lead == cplx{} && std::abs(a(best, j)) > 1e-12) lead = a(best, j);
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      cplx c = a(best, j) / lead;
      if (std::abs(c.real()) < 1e-15) c.real(0.0);
      if (std::abs(c.imag()) < 1e-15) c.imag(0.0);
      form[j] = c;
    }
    auto same = [&](const Pending& p) {
      for (std::size_t j = 0; j < dim_; ++j)
        if (std::abs(p.form[j] - form[j]) > 1e-9) return false;
      return true;
    };
    auto it = std::find_if(found.begin(), found.end(), same);
    if (it == found.end()) {
      found.push_back({form, {k}});
    } else {
      it->members.push_back(k);
    }
  }
  for (const auto& p : found) {
    Hyperplane h;
    h.linear_form = p.form;
    h.cyclic_order = static_cast<int>(p.members.size()) + 1;
    const cplx target = root_of_unity(1, h.cyclic_order);
    h.generator = p.members.front();
    for (std::size_t k : p.members) {
      if (std::abs(elements_[k].det() - target) < 1e-9) {
        h.generator = k;
        break;
      }
    }
    hyperplanes_.push_back(std::move(h));
  }
}

std::string ReflectionGroup::label() const {
  switch (kind_) {
    case GroupKind::symmetric: return "S_" + std::to_string(dim_);
    case GroupKind::abelian_diagonal: {
      std::string s;
      for (int n : orders_) s += (s.empty() ? "" : "x") + std::string("Z/") + std::to_string(n);
      return s;
    }
    case GroupKind::custom: return "custom(order " + std::to_string(order()) + ")";
  }
  return "group";
}

std::vector<Hyperplane> reflecting_hyperplanes(const ReflectionGroup& g) { return g.hyperplanes(); }

// ---------------------------------------------------------------------------
// Characters

std::vector<int> character_exponents(const ReflectionGroup& g, const std::vector<cplx>& values) {
  std::vector<int> out;
  for (const auto& h : g.hyperplanes()) {
    const cplx target = values[h.generator];
    const cplx det = g.element(h.generator).det();
    cplx power = 1.0;
    int found = -1;
    for (int c = 0; c < h.cyclic_order; ++c) {
      if (std::abs(power - target) < 1e-9) {
        found = c;
        break;
      }
      power *= det;
    }
    if (found < 0) throw Error(ErrorCode::domain, "character value on a hyperplane generator is not a power of its determinant");
    out.push_back(found);
  }
  return out;
}

double character_defect(const ReflectionGroup& g, const Character& chi) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    worst = std::max(worst, std::abs(std::abs(chi(i)) - 1.0));
    for (std::size_t s : g.generators()) {
      worst = std::max(worst, std::abs(chi(g.product_index(s, i)) - chi(s) * chi(i)));
    }
  }
  return worst;
}

Character make_character(const ReflectionGroup& g, std::vector<cplx> values, std::string label) {
  if (values.size() != g.order()) throw Error(ErrorCode::dimension, "character table length differs from group order");
  Character chi{std::move(values), std::move(label), {}, 1};
  if (character_defect(g, chi) > 1e-10) throw Error(ErrorCode::domain, "values are not a one-dimensional character");
  chi.exponents = character_exponents(g, chi.values);
  return chi;
}

std::vector<Character> one_dim_characters(const ReflectionGroup& g) {
  std::vector<Character> out;
  if (g.kind() == GroupKind::symmetric) {
    std::vector<cplx> trivial(g.order(), 1.0), sign(g.order());
    for (std::size_t i = 0; i < g.order(); ++i) sign[i] = 1.0 / g.element(i).det();
    out.push_back({trivial, "trivial", character_exponents(g, trivial), 1});
    out.push_back({sign, "sign", character_exponents(g, sign), 1});
    return out;
  }
  if (g.kind() == GroupKind::abelian_diagonal) {
    const auto& orders = g.orders();
    const std::size_t d = orders.size();
    std::vector<int> kk(d, 0);
    std::vector<std::vector<int>> element_exps(g.order(), std::vector<int>(d));
    for (std::size_t flat = 0; flat < g.order(); ++flat) {
      std::size_t rest = flat;
      for (std::size_t i = d; i-- > 0;) {
        element_exps[flat][i] = static_cast<int>(rest % static_cast<std::size_t>(orders[i]));
        rest /= static_cast<std::size_t>(orders[i]);
      }
    }
    for (std::size_t flat = 0; flat < g.order(); ++flat) {
      const auto& j = element_exps[flat];
      std::vector<cplx> values(g.order());
      for (std::size_t e = 0; e < g.order(); ++e) {
        cplx v = 1.0;
        for (std::size_t i = 0; i < d; ++i) v *= root_of_unity(static_cast<long>(j[i]) * element_exps[e][i], orders[i]);
        values[e] = v;
      }
      bool is_trivial = std::all_of(j.begin(), j.end(), [](int x) { return x == 0; });
      bool is_sign = !is_trivial;
      for (std::size_t i = 0; i < d; ++i)
        if (j[i] != (orders[i] - 1) % orders[i]) is_sign = false;
      std::string label;
      if (is_trivial) {
        label = "trivial";
      } else if (is_sign) {
        label = "sign";
      } else {
        label = "chi(";
        for (std::size_t i = 0; i < d; ++i) label += (i ? "," : "") + std::to_string(j[i]);
        label += ")";
      }
      out.push_back({values, label, character_exponents(g, values), 1});
    }
    return out;
  }
  throw Error(ErrorCode::unsupported, "one-dimensional characters of custom groups must be supplied");
}

Character character_by_label(const ReflectionGroup& g, const std::string& label) {
  for (auto& chi : one_dim_characters(g))
    if (chi.label == label) return chi;
  throw Error(ErrorCode::usage, "unknown character '" + label + "' for " + g.label());
}

std::vector<Character> full_character_table(const ReflectionGroup& g) {
  if (g.kind() == GroupKind::abelian_diagonal) return one_dim_characters(g);
  if (g.kind() == GroupKind::symmetric && g.dimension() == 2) return one_dim_characters(g);
  if (g.kind() == GroupKind::symmetric && g.dimension() == 3) {
    auto table = one_dim_characters(g);
    Character standard;
    standard.label = "standard";
    standard.degree = 2;
    for (const auto& el : g.elements()) {
      int fixed = 0;
      for (int j = 0; j < 3; ++j)
        if ((*el.permutation)[j] == j) ++fixed;
      standard.values.emplace_back(fixed - 1.0, 0.0);
    }
    table.push_back(std::move(standard));
    return table;
  }
  throw Error(ErrorCode::unsupported, "no complete character table for " + g.label());
}

MultiPoly generating_polynomial(const ReflectionGroup& g, const Character& chi) {
  if (chi.degree != 1) throw Error(ErrorCode::domain, "generating polynomials exist for one-dimensional characters only");
  MultiPoly out = MultiPoly::constant(g.dimension(), 1.0);
  const auto& hs = g.hyperplanes();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (chi.exponents[i] > 0) out = out * hs[i].as_polynomial().pow(chi.exponents[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json to_json(const ReflectionGroup& g) {
  nlohmann::json j;
  j["kind"] = to_string(g.kind());
  j["dimension"] = g.dimension();
  if (g.kind() == GroupKind::symmetric) j["degree"] = g.dimension();
  if (g.kind() == GroupKind::abelian_diagonal) j["orders"] = g.orders();
  nlohmann::json gens = nlohmann::json::array();
  for (std::size_t k : g.generators()) {
    const CMatrix& m = g.element(k).matrix;
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) rows.push_back({m(r, c).real(), m(r, c).imag()});
    gens.push_back(rows);
  }
  j["generators"] = gens;
  return j;
}

ReflectionGroup group_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "symmetric") {
    int d = j.contains("degree") ? j.at("degree").get<int>() : j.at("dimension").get<int>();
    return ReflectionGroup::symmetric(d);
  }
  if (kind == "abelian_diagonal" || kind == "cyclic") {
    return ReflectionGroup::cyclic_diagonal(j.at("orders").get<std::vector<int>>());
  }
  if (kind == "custom") {
    const auto d = j.at("dimension").get<Eigen::Index>();
    std::vector<CMatrix> gens;
    for (const auto& flat : j.at("generators")) {
      if (static_cast<Eigen::Index>(flat.size()) != d * d) throw Error(ErrorCode::usage, "generator has wrong number of entries");
      CMatrix m(d, d);
      for (Eigen::Index k = 0; k < d * d; ++k) m(k / d, k % d) = cplx(flat[k][0].get<double>(), flat[k][1].get<double>());
      gens.push_back(m);
    }
    return ReflectionGroup::from_generators(gens);
  }
  throw Error(ErrorCode::usage, "unknown group kind '" + kind + "'");
}

}  // namespace qb
