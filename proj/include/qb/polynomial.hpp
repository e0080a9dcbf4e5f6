#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qb/common.hpp"
#include "qb/multi_index.hpp"

namespace qb {

/// Coefficients with modulus below this are dropped. This is the only symbolic
/// tolerance in the polynomial layer.
inline constexpr double kPruneThreshold = 1e-15;

/// Sparse polynomial in d complex variables with complex coefficients.
/// Terms are kept in graded-lex order; the leading term is the last one.
class MultiPoly {
 public:
  using Terms = std::map<MultiIndex, cplx>;

  MultiPoly() = default;
  explicit MultiPoly(std::size_t dim) : dim_(dim) {}

  static MultiPoly constant(std::size_t dim, cplx c);
  static MultiPoly variable(std::size_t dim, std::size_t i);
  static MultiPoly monomial(const MultiIndex& exps, cplx c = 1.0);

  std::size_t dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c to the coefficient of z^exps, pruning if the result is negligible.
  void add_term(const MultiIndex& exps, cplx c);
  cplx coeff(const MultiIndex& exps) const;

  int total_degree() const;
  /// Largest single-variable exponent over all terms.
  int max_exponent() const;
  const MultiIndex& leading_index() const;
  double max_abs_coeff() const;

  cplx evaluate(std::span<const cplx> z) const;
  MultiPoly derivative(std::size_t var) const;
  /// Polynomial with conjugated coefficients, i.e. conj(f(conj z)).
  MultiPoly conj_coeffs() const;
  /// Component of total degree exactly n.
  MultiPoly homogeneous_part(int n) const;
  void prune(double threshold = kPruneThreshold);

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(cplx s);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, cplx s) { return a *= s; }
  friend MultiPoly operator*(cplx s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly pow(int k) const;

  std::string to_string(const std::string& var = "z") const;

 private:
  std::size_t dim_ = 0;
  Terms terms_;
};

/// Max-abs coefficient of a - b.
double coeff_distance(const MultiPoly& a, const MultiPoly& b);

/// u(z) = sum c_{a,b} z^a conj(z)^b, stored as a polynomial in 2d variables
/// (z_1..z_d, conj z_1..conj z_d).
class MixedSymbol {
 public:
  MixedSymbol() = default;
  explicit MixedSymbol(std::size_t dim) : dim_(dim), poly_(2 * dim) {}
  /// Wraps a polynomial in 2d variables.
  MixedSymbol(std::size_t dim, MultiPoly joint);

  static MixedSymbol constant(std::size_t dim, cplx c);
  static MixedSymbol holomorphic(const MultiPoly& f);
  /// conj(f) as a symbol: exponents move to the conjugate slots.
  static MixedSymbol antiholomorphic(const MultiPoly& f);
  static MixedSymbol term(const MultiIndex& a, const MultiIndex& b, cplx c = 1.0);

  std::size_t dim() const { return dim_; }
  const MultiPoly& joint() const { return poly_; }
  bool is_zero() const { return poly_.is_zero(); }

  void add_term(const MultiIndex& a, const MultiIndex& b, cplx c);

  struct Term {
    MultiIndex a;  // holomorphic exponents
    MultiIndex b;  // anti-holomorphic exponents
    cplx c;
  };
  std::vector<Term> term_list() const;

  bool is_holomorphic() const;
  bool is_antiholomorphic() const;
  /// Max over terms and coordinates of max(a_i, b_i): the band half-width of T_u.
  int band_margin() const;
  int max_exponent() const { return poly_.max_exponent(); }

  /// Holomorphic part (terms with b = 0, excluding the constant if
  /// `drop_constant`), and the polynomial r with conj(r) = anti-holomorphic part.
  MultiPoly holomorphic_part(bool drop_constant = false) const;
  MultiPoly antiholomorphic_part_conj(bool drop_constant = false) const;

  MixedSymbol conjugate() const;
  cplx evaluate(std::span<const cplx> z) const;
  /// Symbolic d^2/dz_k dconj(z_l).
  MixedSymbol mixed_partial(std::size_t k, std::size_t l) const;
  bool is_pluriharmonic() const;

  MixedSymbol& operator+=(const MixedSymbol& other);
  MixedSymbol& operator-=(const MixedSymbol& other);
  MixedSymbol& operator*=(cplx s);
  friend MixedSymbol operator+(MixedSymbol a, const MixedSymbol& b) { return a += b; }
  friend MixedSymbol operator-(MixedSymbol a, const MixedSymbol& b) { return a -= b; }
  friend MixedSymbol operator*(MixedSymbol a, cplx s) { return a *= s; }
  friend MixedSymbol operator*(cplx s, MixedSymbol a) { return a *= s; }
  friend MixedSymbol operator*(const MixedSymbol& a, const MixedSymbol& b);

  std::string to_string() const;

 private:
  std::size_t dim_ = 0;
  MultiPoly poly_;
};

double coeff_distance(const MixedSymbol& a, const MixedSymbol& b);

/// Polynomial map C^d -> C^k given by its components.
struct PolyMap {
  std::vector<MultiPoly> components;

  std::size_t source_dim() const { return components.empty() ? 0 : components.front().dim(); }
  std::size_t target_dim() const { return components.size(); }
  Point evaluate(std::span<const cplx> z) const;
  /// Componentwise conjugate-coefficient map, so that conj(theta(z)) =
  /// conj_coeffs(theta)(conj z).
  PolyMap conj_coeffs() const;
};

/// Exact composition f(theta_1, ..., theta_k).
MultiPoly compose_map(const MultiPoly& f, const PolyMap& theta);

/// Lift of a symbol in the target variables w: every w^a conj(w)^b becomes
/// theta^a conj(theta)^b.
MixedSymbol compose_map(const MixedSymbol& u, const PolyMap& theta);

/// Symbolic determinant of the complex Jacobian [d theta_i / d z_j].
MultiPoly jacobian_det(const PolyMap& theta);

// JSON forms: a polynomial is a list of {exponents, re, im}; a mixed symbol
// adds conj_exponents to every entry.
nlohmann::json to_json(const MultiPoly& f);
nlohmann::json to_json(const MixedSymbol& u);
MultiPoly multipoly_from_json(const nlohmann::json& j, std::size_t dim);
MixedSymbol mixed_from_json(const nlohmann::json& j, std::size_t dim);

/// Parses text such as "z1*conj(z2) + (0.5-2i)*z1^2 - zb1". Variables are
/// z1..zd and zb1..zbd; conj(...) conjugates a subexpression.
MixedSymbol parse_symbol(const std::string& text, std::size_t dim);
/// As parse_symbol, but the result must be holomorphic.
MultiPoly parse_polynomial(const std::string& text, std::size_t dim);

}  // namespace qb
