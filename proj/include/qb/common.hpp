#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qb {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A point in C^d.
using Point = std::vector<cplx>;

enum class ErrorCode {
  size,             // enumeration bound exceeded
  rank,             // singular integer matrix
  domain,           // argument outside the operation's domain
  unsupported,      // group kind / table not available
  dimension,        // dimension mismatch
  divisibility,     // polynomial not divisible by the generating polynomial
  truncation,       // symbol exponents exceed truncation
  margin,           // interior margin smaller than the band width
  singular_point,   // evaluation on the branch locus
  invariance,       // symbol / weight not G-invariant
  not_pluriharmonic,
  internal,
  usage,
  io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + " error: " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kPi = 3.14159265358979323846;

/// Primitive n-th root of unity raised to the k-th power, exp(2 pi i k / n).
/// Exact for k/n in {0, 1/4, 1/2, 3/4}.
cplx root_of_unity(long k, long n);

}  // namespace qb
