#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace qb {

/// Exponent multi-index with a fixed capacity. Mixed symbols use 2d slots
/// (holomorphic first, anti-holomorphic second), so the capacity covers d <= 6.
class MultiIndex {
 public:
  static constexpr std::size_t kCapacity = 12;
  static constexpr int kMaxExponent = 64;

  MultiIndex() = default;
  explicit MultiIndex(std::size_t size);
  MultiIndex(std::initializer_list<int> exps);
  explicit MultiIndex(std::span<const int> exps);

  std::size_t size() const { return size_; }
  int operator[](std::size_t i) const { return e_[i]; }
  void set(std::size_t i, int value);

  int total_degree() const;
  int max_exponent() const;
  bool is_zero() const { return total_degree() == 0; }

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; requires other <= *this componentwise.
  MultiIndex operator-(const MultiIndex& other) const;
  bool divides(const MultiIndex& other) const;

  /// First `n` slots / slots [n, 2n) as an index of size n.
  MultiIndex head(std::size_t n) const;
  MultiIndex tail(std::size_t n) const;
  static MultiIndex concat(const MultiIndex& a, const MultiIndex& b);

  std::vector<int> to_vector() const;
  std::string to_string() const;

  /// Graded lexicographic order: total degree first, then lexicographic with
  /// the first variable most significant.
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const;

 private:
  std::array<std::uint8_t, kCapacity> e_{};
  std::uint8_t size_ = 0;
};

/// All indices of dimension d with every exponent <= n, in graded-lex order.
std::vector<MultiIndex> box_indices(std::size_t d, int n);

/// All indices of dimension d with total degree exactly n, in graded-lex order.
std::vector<MultiIndex> homogeneous_indices(std::size_t d, int n);

}  // namespace qb
