#include "qb/verify.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include "qb/bergman.hpp"
#include "qb/group_action.hpp"
#include "qb/isotypic.hpp"
#include "qb/parallel.hpp"
#include "qb/quotient.hpp"
#include "qb/smith.hpp"

namespace qb {

namespace {

using json = nlohmann::json;

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorCode::usage, msg); }

const std::vector<std::string>& known_kinds() {
  static const std::vector<std::string> kinds{
      "cst-dimensions", "jacobian",  "decompose",  "toeplitz",     "transfer-product", "transfer-commutator",
      "lemma-pr",       "kernel-check", "berezin", "snf",          "isometry",         "intertwining",
      "reducing",       "volume",    "norms"};
  return kinds;
}

bool uses_group(const std::string& kind) {
  return kind != "lemma-pr" && kind != "berezin" && kind != "snf" && kind != "norms" && kind != "kernel-check" &&
         kind != "toeplitz";
}

Point point_from_json(const json& j) {
  Point p;
  if (!j.is_array()) usage("a point must be a list of coordinates");
  for (const auto& c : j) {
    if (c.is_number()) p.emplace_back(c.get<double>(), 0.0);
    else if (c.is_array() && c.size() == 2) p.emplace_back(c[0].get<double>(), c[1].get<double>());
    else usage("a coordinate must be a number or [re, im]");
  }
  return p;
}

json point_to_json(const Point& p) {
  json out = json::array();
  for (auto c : p) out.push_back({c.real(), c.imag()});
  return out;
}

MixedSymbol symbol_from(const json& j, std::size_t dim) {
  if (j.is_string()) return parse_symbol(j.get<std::string>(), dim);
  return mixed_from_json(j, dim);
}

std::vector<Point> random_points(std::size_t dim, std::size_t count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out(count, Point(dim));
  for (auto& p : out)
    for (auto& c : p) c = std::polar(radius * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
  return out;
}

// Number of monomials of weighted degree n in variables of the given degrees.
long long hilbert_coefficient(const std::vector<int>& degrees, int n) {
  std::vector<long long> c(static_cast<std::size_t>(n) + 1, 0);
  c[0] = 1;
  for (int d : degrees)
    for (int k = d; k <= n; ++k) c[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k - d)];
  return c[static_cast<std::size_t>(n)];
}

class Runner {
 public:
  explicit Runner(const ExperimentConfig& cfg) : cfg_(cfg) {}

  Report run() {
    validate();
    rep_.experiment = cfg_.name.empty() ? cfg_.kind : cfg_.name;
    rep_.kind = cfg_.kind;
    rep_.expect_fail = cfg_.expect_fail;
    if (group_) rep_.group = group_->label();
    const std::string& k = cfg_.kind;
    if (k == "cst-dimensions") cst_dimensions();
    else if (k == "jacobian") jacobian();
    else if (k == "decompose") decompose();
    else if (k == "toeplitz") toeplitz();
    else if (k == "transfer-product") transfer(TransferMode::product);
    else if (k == "transfer-commutator") transfer(TransferMode::commutator);
    else if (k == "lemma-pr") lemma_pr();
    else if (k == "kernel-check") kernel_check();
    else if (k == "berezin") berezin_fixed_points();
    else if (k == "snf") snf();
    else if (k == "isometry") isometry();
    else if (k == "intertwining") intertwining();
    else if (k == "reducing") reducing();
    else if (k == "volume") volume();
    else if (k == "norms") norms();
    return std::move(rep_);
  }

 private:
  void validate() {
    if (std::find(known_kinds().begin(), known_kinds().end(), cfg_.kind) == known_kinds().end())
      usage("unknown experiment kind '" + cfg_.kind + "'");
    if (cfg_.truncation < 0 || cfg_.truncation > kMaxTruncation)
      usage("truncation must be in [0, " + std::to_string(kMaxTruncation) + "]");
    if (uses_group(cfg_.kind)) {
      group_ = group_from_spec(cfg_.group);
      dim_ = group_->dimension();
      if (!cfg_.alpha.empty() && cfg_.alpha.size() != dim_) usage("alpha has the wrong length for " + group_->label());
    } else {
      dim_ = cfg_.alpha.empty() ? 1 : cfg_.alpha.size();
    }
    if (dim_ > kMaxExperimentDim) usage("experiments support d <= 3");
    alpha_ = cfg_.alpha.empty() ? std::vector<double>(dim_, 0.0) : cfg_.alpha;
    for (double a : alpha_)
      if (!(a > -1.0)) usage("alpha entries must exceed -1");
    for (const auto& p : cfg_.points)
      if (p.size() != dim_) usage("point has the wrong dimension");
  }

  double tol(const std::string& name) const {
    auto it = cfg_.tolerances.find(name);
    return it != cfg_.tolerances.end() ? it->second : default_tolerances().at(name);
  }

  MixedSymbol symbol(const std::string& role, const std::string& fallback = {}) const {
    auto it = cfg_.symbols.find(role);
    if (it != cfg_.symbols.end()) return symbol_from(it->second, dim_);
    if (fallback.empty()) usage("experiment '" + cfg_.kind + "' needs symbol '" + role + "'");
    return parse_symbol(fallback, dim_);
  }

  QuadratureOrders orders(QuadratureOrders fallback) const { return cfg_.orders_set ? cfg_.orders : fallback; }

  QuotientDescriptor descriptor(const std::string& fallback_label) const {
    const std::string label = cfg_.character.empty() ? fallback_label : cfg_.character;
    return QuotientDescriptor::make(*group_, character_by_label(*group_, label), Weight::polydisc(alpha_));
  }

  std::vector<Point> points(std::size_t count, double radius) const {
    if (!cfg_.points.empty()) return cfg_.points;
    return random_points(dim_, cfg_.samples > 0 ? static_cast<std::size_t>(cfg_.samples) : count, radius, cfg_.seed);
  }

  void add(std::string name, double residual, double tolerance, bool expect_fail = false, bool warning = false) {
    rep_.checks.push_back(make_check(std::move(name), residual, tolerance, expect_fail, warning));
  }

  void cst_dimensions() {
    const auto degrees = basic_degrees(*group_);
    json dims = json::array();
    int defects = 0;
    for (int n = 0; n <= cfg_.truncation; ++n) {
      const int got = invariant_dimension(*group_, n);
      const long long want = hilbert_coefficient(degrees, n);
      if (got != want) ++defects;
      dims.push_back({{"degree", n}, {"dimension", got}, {"expected", want}});
      add("dimension[" + std::to_string(n) + "]", std::abs(static_cast<double>(got - want)), tol("integer"),
          cfg_.expect_fail);
    }
    rep_.details["basic_degrees"] = degrees;
    rep_.details["dimensions"] = dims;
    rep_.details["defects"] = defects;
  }

  void jacobian() {
    const MultiPoly j = jacobian_det(basic_map(*group_));
    MultiPoly model = MultiPoly::constant(dim_, 1.0);
    for (const auto& h : group_->hyperplanes()) model = model * h.as_polynomial().pow(h.cyclic_order - 1);
    cplx num{}, den{};
    for (const auto& [e, c] : model.terms()) {
      num += std::conj(c) * j.coeff(e);
      den += std::norm(c);
    }
    const cplx scale = num / den;
    const double res = coeff_distance(j, model * scale);
    add("jacobian_fit", res / std::max(1.0, j.max_abs_coeff()), tol("jacobian"), cfg_.expect_fail);
    rep_.details["scale"] = {scale.real(), scale.imag()};
    rep_.details["jacobian"] = j.to_string();
  }

  void decompose() {
    const Weight w = Weight::polydisc(alpha_);
    const MonomialNorms nrm(w);
    const auto table = full_character_table(*group_);
    std::vector<MultiPoly> monomials;
    for (int k = 0; k <= cfg_.truncation; ++k)
      for (const auto& e : homogeneous_indices(dim_, k)) monomials.push_back(MultiPoly::monomial(e));
    std::vector<std::vector<MultiPoly>> proj(table.size());
    for (std::size_t c = 0; c < table.size(); ++c)
      for (const auto& m : monomials) proj[c].push_back(project(*group_, table[c], m));

    double idem = 0.0, adj = 0.0, orth = 0.0;
    for (std::size_t c = 0; c < table.size(); ++c) {
      for (std::size_t i = 0; i < monomials.size(); ++i) {
        idem = std::max(idem, coeff_distance(project(*group_, table[c], proj[c][i]), proj[c][i]));
        for (std::size_t j = 0; j < monomials.size(); ++j) {
          if (monomials[i].total_degree() != monomials[j].total_degree()) continue;
          adj = std::max(adj, std::abs(inner_product(proj[c][i], monomials[j], nrm) -
                                       inner_product(monomials[i], proj[c][j], nrm)));
          for (std::size_t e = c + 1; e < table.size(); ++e)
            orth = std::max(orth, std::abs(inner_product(proj[c][i], proj[e][j], nrm)));
        }
      }
    }
    const double t = tol("projection");
    add("idempotence", idem, t, cfg_.expect_fail);
    add("self_adjointness", adj, t, cfg_.expect_fail);
    add("orthogonality", orth, t, cfg_.expect_fail);
    add("completeness", completeness_defect(*group_, cfg_.truncation), t, cfg_.expect_fail);
    json labels = json::array();
    for (const auto& chi : table) labels.push_back({{"label", chi.label}, {"degree", chi.degree}});
    rep_.details["characters"] = labels;
    if (cfg_.truncation <= 8) {
      json dims = json::object();
      for (const auto& chi : one_dim_characters(*group_))
        dims[chi.label] = isotypic_basis(QuotientDescriptor::make(*group_, chi, w), cfg_.truncation).size();
      rep_.details["component_dimensions"] = dims;
    }
  }

  void toeplitz() {
    const Weight w = Weight::polydisc(alpha_);
    const MixedSymbol u = symbol("u");
    const int n = cfg_.truncation;
    const int band = u.band_margin();
    const TruncatedOperator exact = toeplitz_matrix(u, w, n);
    const QuadratureOrders o = orders({n + band + 2, 2 * (n + band) + 4});
    const TruncatedOperator quad = toeplitz_quadrature([&](std::span<const cplx> z) { return u.evaluate(z); }, w, n, o,
                                                       band);
    add("exact_vs_quadrature", residual(exact.matrix, quad.matrix).max_abs, tol("quadrature"), cfg_.expect_fail);
    rep_.details["size"] = exact.size();
    rep_.details["band_margin"] = band;
    rep_.details["symbol"] = u.to_string();
  }

  void transfer(TransferMode mode) {
    const Weight w = Weight::polydisc(alpha_);
    const MixedSymbol u = symbol("u"), v = symbol("v");
    MixedSymbol q(dim_);
    if (mode == TransferMode::product) q = cfg_.symbols.count("q") ? symbol("q") : u * v;
    TransferReport tr = transfer_check(*group_, w, u, v, q, mode, cfg_.truncation, tol("transfer"));
    tr.experiment = rep_.experiment;
    for (const auto& c : tr.characters) add("residual[" + c.label + "]", c.residual, tol("transfer"), cfg_.expect_fail);
    add("residual[full]", tr.full_space.residual, tol("transfer"), cfg_.expect_fail);
    add("joint_consistent", tr.joint_consistent ? 0.0 : 1.0, tol("integer"));
    rep_.details["transfer"] = tr.to_json();
  }

  static void split_harmonic(const MixedSymbol& s, MultiPoly& hol, MultiPoly& anti, const char* role) {
    if (coeff_distance(s, MixedSymbol::holomorphic(s.holomorphic_part()) +
                              MixedSymbol::antiholomorphic(s.antiholomorphic_part_conj(true))) != 0.0)
      throw Error(ErrorCode::usage, std::string("symbol '") + role + "' must be holomorphic plus anti-holomorphic");
    hol = s.holomorphic_part();
    anti = s.antiholomorphic_part_conj(true);
  }

  void lemma_pr() {
    const Weight w = Weight::polydisc(alpha_);
    MultiPoly f1, f2, g1, g2;
    split_harmonic(symbol("f"), f1, f2, "f");
    split_harmonic(symbol("g"), g1, g2, "g");
    const MixedSymbol h = symbol("h");
    std::vector<Point> pts = cfg_.points;
    if (pts.empty()) {
      pts.push_back(Point(dim_, 0.0));
      for (auto& p : random_points(dim_, 2, 0.6, cfg_.seed)) pts.push_back(p);
    }
    const LemmaPrReport lr = lemma_pr_residual(f1, f2, g1, g2, h, w, pts, cfg_.truncation, orders({}));
    bool warn = false;
    for (const auto& p : lr.points) warn = warn || p.warning;
    const double tb = tol("berezin"), to = tol("operator");
    add("berezin_side", lr.berezin_residual, tb, cfg_.expect_fail, warn);
    add("operator_side", lr.operator_residual, to, cfg_.expect_fail);
    const bool b_zero = lr.berezin_residual < tb, o_zero = lr.operator_residual < to;
    add("indicators_agree", b_zero == o_zero ? 0.0 : 1.0, tol("integer"));
    rep_.details["lemma_pr"] = lr.to_json();
  }

  void kernel_check() {
    const Weight w = Weight::polydisc(alpha_);
    MultiPoly p = cfg_.symbols.count("p") ? symbol("p").holomorphic_part() : random_polynomial(6);
    if (cfg_.symbols.count("p") && !symbol("p").is_holomorphic()) usage("symbol 'p' must be holomorphic");
    const auto ys = points(20, 0.6);
    const MonomialNorms nrm(w);
    const int deg = std::max(1, p.total_degree());
    const QuadratureOrders o = orders({deg + 2, 64});
    double exact = 0.0, quad = 0.0;
    bool warn = false;
    for (const auto& y : ys) {
      const cplx py = p.evaluate(y);
      exact = std::max(exact, std::abs(kernel_pairing(p, w, y) - py));
      auto r = quadrature_integral(
          [&](std::span<const cplx> z) { return p.evaluate(z) * std::conj(kernel_eval(w, z, y)); }, w, o);
      quad = std::max(quad, std::abs(r.value - py));
      warn = warn || r.warning;
    }
    add("reproducing_series", exact, tol("kernel"), cfg_.expect_fail);
    add("reproducing_quadrature", quad, tol("kernel"), cfg_.expect_fail, warn);
    rep_.details["polynomial"] = p.to_string();
    rep_.details["points"] = ys.size();
  }

  MultiPoly random_polynomial(int degree) const {
    std::mt19937_64 rng(cfg_.seed + 7);
    std::normal_distribution<double> normal;
    MultiPoly p(dim_);
    for (int k = 0; k <= degree; ++k)
      for (const auto& e : homogeneous_indices(dim_, k)) p.add_term(e, cplx(normal(rng), normal(rng)));
    return p;
  }

  void berezin_fixed_points() {
    const Weight w = Weight::polydisc(alpha_);
    const MixedSymbol f = symbol("f");
    double worst = 0.0;
    bool warn = false;
    for (const auto& z : points(10, 0.8)) {
      auto r = berezin(w, f, z, orders({}));
      worst = std::max(worst, std::abs(r.value - f.evaluate(z)));
      warn = warn || r.warning;
    }
    add("fixed_point", worst, tol("berezin"), cfg_.expect_fail, warn);
    rep_.details["symbol"] = f.to_string();
    rep_.details["harmonic"] = f.is_pluriharmonic();
  }

  void snf() {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_int_distribution<int> entry(-10, 10);
    const int count = cfg_.samples > 0 ? cfg_.samples : 20;
    int bad_product = 0, bad_unimodular = 0, bad_chain = 0, done = 0;
    while (done < count) {
      const int n = 2 + done % 2;
      IntMatrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = entry(rng);
      if (int_determinant(a) == 0) continue;
      const auto s = smith_normal_form(a);
      if (s.P * s.D * s.Q != a) ++bad_product;
      if (std::abs(int_determinant(s.P)) != 1 || std::abs(int_determinant(s.Q)) != 1) ++bad_unimodular;
      for (int i = 0; i < n; ++i) {
        bool off_diag = false;
        for (int j = 0; j < n; ++j)
          if (i != j && s.D(i, j) != 0) off_diag = true;
        if (off_diag || s.D(i, i) <= 0 || (i + 1 < n && s.D(i + 1, i + 1) % s.D(i, i) != 0)) {
          ++bad_chain;
          break;
        }
      }
      ++done;
    }
    add("reconstruction", bad_product, tol("integer"), cfg_.expect_fail);
    add("unimodular", bad_unimodular, tol("integer"), cfg_.expect_fail);
    add("divisibility", bad_chain, tol("integer"), cfg_.expect_fail);
    rep_.details["matrices"] = count;
  }

  void isometry() {
    const auto q = descriptor("sign");
    const MultiPoly phi = symbol("phi", "z1^2 + (0.5-1i)*z2").holomorphic_part();
    const MultiPoly psi = symbol("psi", "z1*z2 + 2 + z1").holomorphic_part();
    const auto c = gamma_isometry(q, phi, psi, orders(kQuotientOrders));
    add("gamma_isometry", c.defect(), tol("quadrature"), cfg_.expect_fail);
    rep_.details["quotient"] = {c.quotient.real(), c.quotient.imag()};
    rep_.details["exact"] = {c.exact.real(), c.exact.imag()};
  }

  void intertwining() {
    const auto q = descriptor("sign");
    const MixedSymbol u = symbol("u");
    const auto basis = isotypic_basis(q, cfg_.truncation);
    const auto exact = compressed_toeplitz(q, basis, compose_map(u, q.theta));
    const auto quad = quotient_toeplitz_quadrature(
        q, basis, [&](std::span<const cplx> w) { return u.evaluate(w); }, orders(kQuotientOrders));
    add("intertwining", residual(exact.matrix, quad.matrix).max_abs, tol("quadrature"), cfg_.expect_fail);
    rep_.details["basis_size"] = basis.size();
    rep_.details["character"] = q.character.label;
  }

  void reducing() {
    const MixedSymbol u = compose_map(symbol("u"), basic_map(*group_));
    const double d = reducing_subspace_defect(*group_, Weight::polydisc(alpha_), u, cfg_.truncation);
    add("off_block", d, tol("exact"), cfg_.expect_fail);
  }

  void volume() {
    const auto q = descriptor("sign");
    const auto v = quotient_volume(q, orders(kQuotientOrders));
    add("volume", std::abs(v.quadrature - v.exact), tol("quadrature"), cfg_.expect_fail);
    rep_.details["quadrature"] = v.quadrature;
    rep_.details["exact"] = v.exact;
  }

  void norms() {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_int_distribution<int> expo(0, 6);
    std::uniform_real_distribution<double> alpha(0.0, 3.0);
    const int count = cfg_.samples > 0 ? cfg_.samples : 30;
    double worst = 0.0;
    bool warn = false;
    for (int s = 0; s < count; ++s) {
      std::vector<double> a = cfg_.alpha.empty() ? std::vector<double>(dim_) : alpha_;
      if (cfg_.alpha.empty())
        for (auto& x : a) x = std::round(alpha(rng) * 4.0) / 4.0;
      MultiIndex n(dim_);
      for (std::size_t i = 0; i < dim_; ++i) n.set(i, expo(rng));
      const Weight w = Weight::polydisc(a);
      auto r = quadrature_integral(
          [&](std::span<const cplx> z) {
            double v = 1.0;
            for (std::size_t i = 0; i < dim_; ++i) v *= std::pow(std::norm(z[i]), n[i]);
            return cplx(v);
          },
          w, orders({16, 8}));
      const double exact = monomial_norm_sq(n, w);
      worst = std::max(worst, std::abs(r.value.real() - exact) / exact);
      warn = warn || r.warning;
    }
    add("relative_error", worst, tol("quadrature"), cfg_.expect_fail, warn);
    rep_.details["samples"] = count;
  }

  const ExperimentConfig& cfg_;
  Report rep_;
  std::optional<ReflectionGroup> group_;
  std::size_t dim_ = 1;
  std::vector<double> alpha_;
};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string exact_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tols{
      {"integer", 0.0},      {"exact", 1e-12},  {"projection", 1e-12}, {"jacobian", 1e-10},
      {"operator", 1e-10},   {"kernel", 1e-10}, {"transfer", kTransferTol}, {"quadrature", 1e-7},
      {"berezin", 1e-6}};
  return tols;
}

ReflectionGroup group_from_spec(const json& spec) {
  if (spec.is_object()) return group_from_json(spec);
  if (!spec.is_string()) usage("group must be a string such as \"S2\" or a group object");
  const std::string s = spec.get<std::string>();
  static const std::regex sym(R"(S_?(\d+))");
  static const std::regex cyc(R"(Z/?(\d+)((?:x|\*)Z/?\d+)*)");
  std::smatch m;
  if (std::regex_match(s, m, sym)) {
    const int d = std::stoi(m[1]);
    if (d < 2 || d > 6) usage("symmetric groups S_2..S_6 are supported");
    return ReflectionGroup::symmetric(d);
  }
  if (std::regex_match(s, cyc)) {
    std::vector<int> orders;
    static const std::regex num(R"(\d+)");
    for (auto it = std::sregex_iterator(s.begin(), s.end(), num); it != std::sregex_iterator(); ++it)
      orders.push_back(std::stoi(it->str()));
    for (int n : orders)
      if (n < 1) usage("cyclic orders must be positive");
    return ReflectionGroup::cyclic_diagonal(orders);
  }
  usage("unsupported group '" + s + "'");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) usage("an experiment must be a JSON object");
  static const std::vector<std::string> keys{"name",  "kind",     "group",      "alpha",  "N",       "truncation",
                                             "orders", "symbols", "character",  "points", "tolerances",
                                             "expect", "seed",    "samples",    "output"};
  for (const auto& [k, v] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) usage("unknown config key '" + k + "'");
  ExperimentConfig c;
  try {
    c.name = j.value("name", "");
    if (!j.contains("kind")) usage("config needs a 'kind'");
    c.kind = j.at("kind").get<std::string>();
    if (j.contains("group")) c.group = j.at("group");
    if (j.contains("alpha")) {
      const auto& a = j.at("alpha");
      c.alpha = a.is_array() ? a.get<std::vector<double>>() : std::vector<double>{a.get<double>()};
    }
    if (j.contains("N")) c.truncation = j.at("N").get<int>();
    if (j.contains("truncation")) c.truncation = j.at("truncation").get<int>();
    if (j.contains("orders")) {
      const auto& o = j.at("orders");
      c.orders.radial = o.value("radial", c.orders.radial);
      c.orders.angular = o.value("angular", c.orders.angular);
      c.orders_set = true;
      if (c.orders.radial < 1 || c.orders.angular < 1) usage("quadrature orders must be positive");
    }
    if (j.contains("symbols")) {
      for (const auto& [k, v] : j.at("symbols").items()) c.symbols[k] = v;
    }
    c.character = j.value("character", "");
    if (j.contains("points"))
      for (const auto& p : j.at("points")) c.points.push_back(point_from_json(p));
    if (j.contains("tolerances")) {
      for (const auto& [k, v] : j.at("tolerances").items()) {
        auto it = default_tolerances().find(k);
        if (it == default_tolerances().end()) usage("unknown tolerance '" + k + "'");
        const double t = v.get<double>();
        if (!(t >= 0.0)) usage("tolerance '" + k + "' must be non-negative");
        if (t != it->second)
          std::cerr << "warning: tolerance '" << k << "' overridden: " << it->second << " -> " << t << "\n";
        c.tolerances[k] = t;
      }
    }
    if (j.contains("expect")) {
      const std::string e = j.at("expect").get<std::string>();
      if (e != "pass" && e != "fail") usage("expect must be \"pass\" or \"fail\"");
      c.expect_fail = e == "fail";
    }
    c.seed = j.value("seed", std::uint64_t{1});
    c.samples = j.value("samples", 0);
    c.output = j.value("output", "");
  } catch (const json::exception& e) {
    usage(std::string("malformed config: ") + e.what());
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  if (!name.empty()) j["name"] = name;
  j["kind"] = kind;
  j["group"] = group;
  if (!alpha.empty()) j["alpha"] = alpha;
  j["N"] = truncation;
  if (orders_set) j["orders"] = {{"radial", orders.radial}, {"angular", orders.angular}};
  if (!symbols.empty()) j["symbols"] = symbols;
  if (!character.empty()) j["character"] = character;
  if (!points.empty()) {
    j["points"] = json::array();
    for (const auto& p : points) j["points"].push_back(point_to_json(p));
  }
  if (!tolerances.empty()) j["tolerances"] = tolerances;
  j["expect"] = expect_fail ? "fail" : "pass";
  j["seed"] = seed;
  if (samples) j["samples"] = samples;
  if (!output.empty()) j["output"] = output;
  return j;
}

std::vector<ExperimentConfig> parse_config(const json& j) {
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    json shared = j;
    shared.erase("experiments");
    if (!j.at("experiments").is_array()) usage("'experiments' must be a list");
    for (const auto& e : j.at("experiments")) {
      json merged = shared;
      merged.update(e);
      out.push_back(ExperimentConfig::from_json(merged));
    }
  } else {
    out.push_back(ExperimentConfig::from_json(j));
  }
  return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    usage("'" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

// ---------------------------------------------------------------------------
// Checks and reports

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::pass_with_warning: return "pass-with-warning";
    case CheckStatus::fail: return "fail";
    case CheckStatus::expected_fail: return "expected-fail";
    case CheckStatus::unexpected_pass: return "unexpected-pass";
  }
  return "fail";
}

CheckStatus check_status_from_string(const std::string& s) {
  for (auto st : {CheckStatus::pass, CheckStatus::pass_with_warning, CheckStatus::fail, CheckStatus::expected_fail,
                  CheckStatus::unexpected_pass})
    if (s == to_string(st)) return st;
  usage("unknown check status '" + s + "'");
}

Check make_check(std::string name, double residual, double tolerance, bool expect_fail, bool warning) {
  Check c{std::move(name), residual, tolerance, expect_fail, warning, CheckStatus::pass};
  const bool holds = residual <= tolerance;
  if (expect_fail) {
    c.status = holds ? CheckStatus::unexpected_pass : CheckStatus::expected_fail;
  } else if (!warning) {
    c.status = holds ? CheckStatus::pass : CheckStatus::fail;
  } else {
    c.status = residual < 10.0 * tolerance ? CheckStatus::pass_with_warning : CheckStatus::fail;
  }
  return c;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); });
}

std::size_t Report::pass_count() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.ok(); }));
}

json Report::to_json(bool include_metadata) const {
  json j;
  j["experiment"] = experiment;
  j["kind"] = kind;
  j["group"] = group;
  j["expect"] = expect_fail ? "fail" : "pass";
  j["passed"] = passed();
  j["checks"] = json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"residual", c.residual},
                           {"tolerance", c.tolerance},
                           {"expect_fail", c.expect_fail},
                           {"warning", c.warning},
                           {"status", to_string(c.status)}});
  j["details"] = details;
  if (include_metadata) j["metadata"] = {{"wall_time_s", wall_time}, {"threads", threads}};
  return j;
}

Report run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Report r = Runner(cfg).run();
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.threads = thread_count();
  return r;
}

std::vector<Report> run_batch(const std::vector<ExperimentConfig>& cfgs) {
  std::vector<Report> out(cfgs.size());
  parallel_for(cfgs.size(), [&](std::size_t i) { out[i] = run_experiment(cfgs[i]); });
  return out;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "md" || s == "markdown") return ReportFormat::md;
  usage("unknown report format '" + s + "'");
}

std::vector<CsvRow> flatten(const std::vector<Report>& reports) {
  std::vector<CsvRow> rows;
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      rows.push_back({r.experiment, r.kind, c.name, c.residual, c.tolerance, c.expect_fail, c.warning, c.status});
  return rows;
}

std::vector<CsvRow> parse_report_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CsvRow> rows;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv_split(line);
    if (f.size() != 8) usage("malformed report row: " + line);
    rows.push_back({f[0], f[1], f[2], std::stod(f[3]), std::stod(f[4]), f[5] == "1", f[6] == "1",
                    check_status_from_string(f[7])});
  }
  return rows;
}

std::string format_reports(const std::vector<Report>& reports, ReportFormat fmt) {
  std::ostringstream os;
  switch (fmt) {
    case ReportFormat::json: {
      json j;
      j["reports"] = json::array();
      for (const auto& r : reports) j["reports"].push_back(r.to_json());
      j["passed"] = exit_code(reports) == 0;
      os << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::csv:
      os << "experiment,kind,check,residual,tolerance,expect_fail,warning,status\n";
      for (const auto& row : flatten(reports))
        os << csv_quote(row.experiment) << ',' << csv_quote(row.kind) << ',' << csv_quote(row.check) << ','
           << exact_double(row.residual) << ',' << exact_double(row.tolerance) << ',' << (row.expect_fail ? 1 : 0)
           << ',' << (row.warning ? 1 : 0) << ',' << to_string(row.status) << "\n";
      break;
    case ReportFormat::md: {
      std::size_t total = 0, ok = 0;
      for (const auto& r : reports) {
        total += r.checks.size();
        ok += r.pass_count();
      }
      os << "# Verification report\n\n";
      os << ok << " of " << total << " checks passed across " << reports.size() << " experiments.\n\n";
      os << "| experiment | kind | group | expect | checks passed | result |\n";
      os << "|---|---|---|---|---|---|\n";
      for (const auto& r : reports)
        os << "| " << r.experiment << " | " << r.kind << " | " << r.group << " | " << (r.expect_fail ? "fail" : "pass")
           << " | " << r.pass_count() << "/" << r.checks.size() << " | " << (r.passed() ? "PASS" : "FAIL") << " |\n";
      for (const auto& r : reports) {
        os << "\n## " << r.experiment << "\n\n| check | residual | tolerance | status |\n|---|---|---|---|\n";
        for (const auto& c : r.checks) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.3e | %.1e", c.residual, c.tolerance);
          os << "| " << c.name << " | " << buf << " | " << to_string(c.status) << " |\n";
        }
      }
      break;
    }
  }
  return os.str();
}

void emit_report(const std::vector<Report>& reports, ReportFormat fmt, const std::string& path) {
  const std::string text = format_reports(reports, fmt);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for '" + path + "'");
}

int exit_code(const std::vector<Report>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.passed(); }) ? 0 : 1;
}

}  // namespace qb
