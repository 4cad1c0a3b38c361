#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qtk {

using Amplitude = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Raised when an argument violates an operation's precondition or a type invariant.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kRenormalizeWindow = 1e-6;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kDegeneracyTolerance = 1e-9;

// Register sizes above this are refused rather than attempting a multi-GiB allocation.
inline constexpr std::size_t kMaxQubits = 30;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t log2_exact(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

}  // namespace qtk
