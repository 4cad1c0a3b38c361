#pragma once

#include <span>
#include <string>
#include <vector>

#include "qtk/core.hpp"

namespace qtk {

/// Index into the computational basis. Qubit 0 is the most significant bit,
/// so the binary digits of `value` read left to right are i_1 i_2 ... i_N.
struct BasisIndex {
  std::uint64_t value = 0;
};

/// Normalized pure state of an n-qubit register, stored densely over the
/// 2^n computational basis states (|0> at index 0).
class StateVector {
 public:
  /// Scalar (0-qubit) state with the single amplitude 1.
  StateVector();

  static StateVector basis(std::size_t n_qubits, BasisIndex index);

  /// Builds a state from raw amplitudes. The length must be a power of two.
  /// Inputs within 1e-6 of unit norm are renormalized; anything else is
  /// rejected, as are non-finite components.
  static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }

  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

  /// Mutable view for in-place gate kernels. Callers must preserve the norm.
  std::span<Amplitude> mutable_amplitudes() { return amplitudes_; }

  /// Bit mask selecting `qubit` inside a BasisIndex.
  std::uint64_t qubit_mask(std::size_t qubit) const;

 private:
  StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes);

  std::size_t n_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
StateVector from_bloch(double theta, double phi);

/// Register concatenation: qubits of `a` come first (most significant).
StateVector tensor(const StateVector& a, const StateVector& b);

/// <bra|ket> = sum_i conj(bra_i) ket_i.
Amplitude inner(const StateVector& bra, const StateVector& ket);

double norm(std::span<const Amplitude> amplitudes);
double norm(const StateVector& state);

/// Probability |amplitude_i|^2 for every basis index.
std::vector<double> probabilities(const StateVector& state);

/// "0101"-style label of a basis index, qubit 0 first.
std::string basis_label(BasisIndex index, std::size_t n_qubits);

}  // namespace qtk
