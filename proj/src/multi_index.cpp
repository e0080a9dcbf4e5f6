#include "qb/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qb/common.hpp"

namespace qb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::size: return "size";
    case ErrorCode::rank: return "rank";
    case ErrorCode::domain: return "domain";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::divisibility: return "divisibility";
    case ErrorCode::truncation: return "truncation";
    case ErrorCode::margin: return "margin";
    case ErrorCode::singular_point: return "singular-point";
    case ErrorCode::invariance: return "invariance";
    case ErrorCode::not_pluriharmonic: return "not-G-pluriharmonic";
    case ErrorCode::internal: return "internal";
    case ErrorCode::usage: return "usage";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

cplx root_of_unity(long k, long n) {
  long r = ((k % n) + n) % n;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == n) return {-1.0, 0.0};
  if (4 * r == n) return {0.0, 1.0};
  if (4 * r == 3 * n) return {0.0, -1.0};
  double angle = 2.0 * kPi * static_cast<double>(r) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

MultiIndex::MultiIndex(std::size_t size) {
  if (size > kCapacity) throw Error(ErrorCode::dimension, "multi-index capacity exceeded");
  size_ = static_cast<std::uint8_t>(size);
}

MultiIndex::MultiIndex(std::initializer_list<int> exps)
    : MultiIndex(std::span<const int>(exps.begin(), exps.size())) {}

MultiIndex::MultiIndex(std::span<const int> exps) : MultiIndex(exps.size()) {
  for (std::size_t i = 0; i < exps.size(); ++i) set(i, exps[i]);
}

void MultiIndex::set(std::size_t i, int value) {
  if (value < 0 || value > kMaxExponent) {
    throw Error(ErrorCode::truncation, "exponent " + std::to_string(value) + " outside [0, 64]");
  }
  e_[i] = static_cast<std::uint8_t>(value);
}

int MultiIndex::total_degree() const {
  int s = 0;
  for (std::size_t i = 0; i < size_; ++i) s += e_[i];
  return s;
}

int MultiIndex::max_exponent() const {
  int m = 0;
  for (std::size_t i = 0; i < size_; ++i) m = std::max<int>(m, e_[i]);
  return m;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (size_ != other.size_) throw Error(ErrorCode::dimension, "multi-index size mismatch");
  MultiIndex r(size_);
  for (std::size_t i = 0; i < size_; ++i) r.set(i, e_[i] + other.e_[i]);
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (size_ != other.size_) throw Error(ErrorCode::dimension, "multi-index size mismatch");
  MultiIndex r(size_);
  for (std::size_t i = 0; i < size_; ++i) r.set(i, e_[i] - other.e_[i]);
  return r;
}

bool MultiIndex::divides(const MultiIndex& other) const {
  for (std::size_t i = 0; i < size_; ++i)
    if (e_[i] > other.e_[i]) return false;
  return true;
}

MultiIndex MultiIndex::head(std::size_t n) const {
  MultiIndex r(n);
  for (std::size_t i = 0; i < n; ++i) r.e_[i] = e_[i];
  return r;
}

MultiIndex MultiIndex::tail(std::size_t n) const {
  MultiIndex r(n);
  for (std::size_t i = 0; i < n; ++i) r.e_[i] = e_[n + i];
  return r;
}

MultiIndex MultiIndex::concat(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a.size_ + b.size_);
  for (std::size_t i = 0; i < a.size_; ++i) r.e_[i] = a.e_[i];
  for (std::size_t i = 0; i < b.size_; ++i) r.e_[a.size_ + i] = b.e_[i];
  return r;
}

std::vector<int> MultiIndex::to_vector() const {
  return std::vector<int>(e_.begin(), e_.begin() + size_);
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < size_; ++i) os << (i ? "," : "") << int(e_[i]);
  os << ')';
  return os.str();
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = size_ <=> other.size_; c != 0) return c;
  if (auto c = total_degree() <=> other.total_degree(); c != 0) return c;
  for (std::size_t i = 0; i < size_; ++i)
    if (auto c = e_[i] <=> other.e_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

bool MultiIndex::operator==(const MultiIndex& other) const {
  return size_ == other.size_ && std::equal(e_.begin(), e_.begin() + size_, other.e_.begin());
}

namespace {
void homogeneous_rec(std::size_t d, std::size_t pos, int remaining, MultiIndex& cur,
                     std::vector<MultiIndex>& out) {
  if (pos + 1 == d) {
    cur.set(pos, remaining);
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    cur.set(pos, k);
    homogeneous_rec(d, pos + 1, remaining - k, cur, out);
  }
}
}  // namespace

std::vector<MultiIndex> homogeneous_indices(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  if (d == 0) return out;
  MultiIndex cur(d);
  homogeneous_rec(d, 0, n, cur, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> box_indices(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= static_cast<std::size_t>(n + 1);
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    MultiIndex idx(d);
    std::size_t rest = flat;
    for (std::size_t i = 0; i < d; ++i) {
      idx.set(i, static_cast<int>(rest % static_cast<std::size_t>(n + 1)));
      rest /= static_cast<std::size_t>(n + 1);
    }
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qb
