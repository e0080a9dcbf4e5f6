#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerical paths.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Partitions of n into at most k parts.
inline long partitions(int n, int k) {
  // by conjugation: partitions with every part <= k
  std::vector<long> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= k; ++part)
    for (int s = part; s <= n; ++s) ways[static_cast<std::size_t>(s)] += ways[static_cast<std::size_t>(s - part)];
  return ways[static_cast<std::size_t>(n)];
}

inline long long gcd_all(const std::vector<long long>& v) {
  long long g = 0;
  for (auto x : v) g = std::gcd(g, std::llabs(x));
  return g;
}

/// Determinant by cofactor expansion (small matrices only).
inline long long det_cofactor(const std::vector<std::vector<long long>>& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  long long s = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<long long>> m;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      m.push_back(row);
    }
    s += (c % 2 ? -1 : 1) * a[0][c] * det_cofactor(m);
  }
  return s;
}

/// gcd of all k x k minors (determinantal divisor d_k).
inline long long determinantal_divisor(const std::vector<std::vector<long long>>& a, std::size_t k) {
  const std::size_t n = a.size();
  std::vector<long long> minors;
  std::vector<bool> rsel(n, false), csel(n, false);
  std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
    do {
      std::vector<std::vector<long long>> m;
      for (std::size_t r = 0; r < n; ++r) {
        if (!rsel[r]) continue;
        std::vector<long long> row;
        for (std::size_t c = 0; c < n; ++c)
          if (csel[c]) row.push_back(a[r][c]);
        m.push_back(row);
      }
      minors.push_back(det_cofactor(m));
    } while (std::prev_permutation(csel.begin(), csel.end()));
  } while (std::prev_permutation(rsel.begin(), rsel.end()));
  return gcd_all(minors);
}

/// Smith invariants from determinantal divisors: delta_k = d_k / d_{k-1}.
inline std::vector<long long> smith_invariants(const std::vector<std::vector<long long>>& a) {
  std::vector<long long> out;
  long long prev = 1;
  for (std::size_t k = 1; k <= a.size(); ++k) {
    const long long dk = determinantal_divisor(a, k);
    out.push_back(dk / prev);
    prev = dk;
  }
  return out;
}

/// Composite Simpson rule on [lo, hi] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// ||z^n||^2 on the disc for omega_alpha, by Simpson in r (angular part exact):
/// (alpha+1) int_0^1 r^{2n} (1-r^2)^alpha 2r dr.
inline double disc_norm_sq(int n, double alpha) {
  // substitute t = r^2, then t = 1 - s^{k} to soften the endpoint singularity for alpha < 0
  auto f = [&](double t) { return std::pow(t, n) * std::pow(1.0 - t, alpha); };
  if (alpha >= 1.0 || alpha == 0.0) return (alpha + 1.0) * simpson(f, 0.0, 1.0, 20000);
  const double k = 4.0;
  auto g = [&](double s) {
    const double t = 1.0 - std::pow(s, k);
    return std::pow(t, n) * k * std::pow(s, k * (alpha + 1.0) - 1.0);
  };
  return (alpha + 1.0) * simpson(g, 0.0, 1.0, 20000);
}

/// Normalized-volume integral over B_2 of |z1|^{2a}|z2|^{2b} by 2-d Simpson
/// in (|z1|^2, |z2|^2) on the triangle, times 2! for the normalization.
inline double ball2_moment(int a, int b) {
  auto inner = [&](double t1) {
    return simpson([&](double t2) { return std::pow(t1, a) * std::pow(t2, b); }, 0.0, 1.0 - t1, 400);
  };
  return 2.0 * simpson(inner, 0.0, 1.0, 400);
}

inline cplx rand_disc_point(std::mt19937_64& rng, double radius = 0.9) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double t = 2.0 * 3.14159265358979323846 * u(rng);
  return std::polar(r, t);
}

}  // namespace oracle
