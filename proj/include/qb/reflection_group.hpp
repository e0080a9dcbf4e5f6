#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qb/common.hpp"
#include "qb/polynomial.hpp"

namespace qb {

/// Entrywise tolerance for identifying group elements.
inline constexpr double kElementTolerance = 1e-12;

struct GroupElement {
  CMatrix matrix;
  /// For permutation groups: sigma e_j = e_{perm[j]}.
  std::optional<std::vector<int>> permutation;
  int order = 0;

  cplx det() const { return matrix.determinant(); }
  /// sigma * z.
  Point apply(std::span<const cplx> z) const;
  bool approx_equal(const CMatrix& other, double tol = kElementTolerance) const;
};

/// Reflecting hyperplane {l(z) = 0}; the form is normalized so that its first
/// nonzero coefficient is 1.
struct Hyperplane {
  std::vector<cplx> linear_form;
  int cyclic_order = 1;
  /// Index of the generator a_i of the pointwise stabilizer, chosen with
  /// det(a_i) = exp(2 pi i / m_i).
  std::size_t generator = 0;

  MultiPoly as_polynomial() const;
};

enum class GroupKind { symmetric, abelian_diagonal, custom };
const char* to_string(GroupKind kind);

class ReflectionGroup {
 public:
  static constexpr std::size_t kDefaultMaxOrder = 100000;

  /// Permutation matrices on C^d, 2 <= d <= 6.
  static ReflectionGroup symmetric(int d);
  /// diag(zeta_1^{k_1}, ..., zeta_d^{k_d}) with zeta_i a primitive orders[i]-th root of unity.
  static ReflectionGroup cyclic_diagonal(const std::vector<int>& orders,
                                         std::size_t max_order = kDefaultMaxOrder);
  /// Closure of the given matrices. Characters must be supplied by the caller.
  static ReflectionGroup from_generators(const std::vector<CMatrix>& generators,
                                         std::size_t max_order = kDefaultMaxOrder);

  std::size_t dimension() const { return dim_; }
  std::size_t order() const { return elements_.size(); }
  GroupKind kind() const { return kind_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const GroupElement& element(std::size_t i) const { return elements_[i]; }
  const std::vector<std::size_t>& generators() const { return generators_; }
  const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  /// Cyclic orders for abelian_diagonal groups.
  const std::vector<int>& orders() const { return orders_; }

  std::size_t identity_index() const { return identity_; }
  std::size_t inverse_index(std::size_t i) const { return inverse_[i]; }
  std::size_t product_index(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> find(const CMatrix& m) const;

  std::string label() const;

 private:
  ReflectionGroup() = default;
  void finalize();
  void compute_hyperplanes();
  static std::vector<long long> key_of(const CMatrix& m);

  std::size_t dim_ = 0;
  GroupKind kind_ = GroupKind::custom;
  std::vector<GroupElement> elements_;
  std::vector<std::size_t> generators_;
  std::vector<Hyperplane> hyperplanes_;
  std::vector<int> orders_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
  std::map<std::vector<long long>, std::size_t> lookup_;
};

/// Class function on a group. Degree 1 characters are homomorphisms to C^*.
struct Character {
  std::vector<cplx> values;  // aligned with ReflectionGroup::elements()
  std::string label;
  /// c_i with chi(a_i) = det(a_i)^{c_i}, 0 <= c_i < m_i (one-dimensional only).
  std::vector<int> exponents;
  int degree = 1;

  cplx operator()(std::size_t element) const { return values[element]; }
};

/// Validates multiplicativity and fills the exponents. For custom groups.
Character make_character(const ReflectionGroup& g, std::vector<cplx> values, std::string label);

/// Least exponents c_i with chi(a_i) = det(a_i)^{c_i}.
std::vector<int> character_exponents(const ReflectionGroup& g, const std::vector<cplx>& values);

/// Largest multiplicativity / unit-modulus defect of a degree-1 character.
double character_defect(const ReflectionGroup& g, const Character& chi);

/// One-dimensional characters: {trivial, sign} for S_d, all |G| characters for
/// diagonal abelian groups. Throws unsupported for custom groups.
std::vector<Character> one_dim_characters(const ReflectionGroup& g);

/// Looks up a one-dimensional character by label ("trivial", "sign", "chi(...)").
Character character_by_label(const ReflectionGroup& g, const std::string& label);

/// All irreducible characters; hardcoded for S_2, S_3 and diagonal abelian groups.
std::vector<Character> full_character_table(const ReflectionGroup& g);

/// l_chi = prod_i l_i^{c_i}.
MultiPoly generating_polynomial(const ReflectionGroup& g, const Character& chi);

/// Reflecting hyperplanes with their cyclic orders (also cached on the group).
std::vector<Hyperplane> reflecting_hyperplanes(const ReflectionGroup& g);

nlohmann::json to_json(const ReflectionGroup& g);
ReflectionGroup group_from_json(const nlohmann::json& j);

}  // namespace qb
