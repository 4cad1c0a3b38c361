#pragma once

#include <span>
#include <vector>

#include "qtk/core.hpp"
#include "qtk/statevec.hpp"

namespace qtk {

/// Square unitary matrix of power-of-two dimension. Construction checks
/// U^dagger U = I entrywise within 1e-10.
class Unitary {
 public:
  explicit Unitary(Matrix entries);

  static Unitary identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// Hermitian matrix (A = A^dagger within 1e-12).
class Observable {
 public:
  explicit Observable(Matrix entries);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }

 private:
  Matrix entries_;
};

/// Unit vector n-hat on the Bloch sphere.
class Axis {
 public:
  /// Requires nx^2 + ny^2 + nz^2 = 1 within 1e-12.
  Axis(double nx, double ny, double nz);

  /// Scales an arbitrary non-zero direction to unit length.
  static Axis normalized(double nx, double ny, double nz);
  /// Axis in the x-z plane at `angle` from +z towards +x.
  static Axis in_xz_plane(double angle);

  static Axis x() { return {1.0, 0.0, 0.0}; }
  static Axis y() { return {0.0, 1.0, 0.0}; }
  static Axis z() { return {0.0, 0.0, 1.0}; }

  double nx() const { return nx_; }
  double ny() const { return ny_; }
  double nz() const { return nz_; }

 private:
  double nx_, ny_, nz_;
};

enum class Pauli { X, Y, Z };

Matrix pauli_matrix(Pauli which);
Unitary pauli(Pauli which);
Observable pauli_observable(Pauli which);

/// n-hat . sigma, the spin observable along `axis`.
Observable spin_observable(const Axis& axis);

/// cos(theta/2) I + i sin(theta/2) n-hat . sigma
Unitary rotation_gate(const Axis& axis, double theta);

/// exp(-i h t / hbar) from the eigendecomposition of h.
Unitary evolve(const Observable& h, double t, double hbar);

/// Matrix product u * v (v acts first on a state).
Unitary compose(const Unitary& u, const Unitary& v);

/// Applies a 2x2 gate to `target` over amplitude pairs that differ only in the
/// target bit. O(2^n) work, no 2^n x 2^n matrix is formed.
void apply_single_in_place(StateVector& state, const Unitary& gate, std::size_t target);
StateVector apply_single(StateVector state, const Unitary& gate, std::size_t target);

/// Applies `gate` to `target` on the subspace where `control` is 1.
void apply_controlled_in_place(StateVector& state, const Unitary& gate, std::size_t control,
                               std::size_t target);
StateVector apply_controlled(StateVector state, const Unitary& gate, std::size_t control,
                             std::size_t target);

/// Applies a full 2^n x 2^n unitary. Dense, for small registers and checks.
StateVector apply_dense(const StateVector& state, const Unitary& gate);

struct ApproximationError {
  /// max over probes of |<psi|(U - V)|psi>|^2
  double probe_max = 0.0;
  /// ||U - V||_2^2 from the largest singular value; bounds probe_max for every state.
  double spectral_bound = 0.0;
};

ApproximationError approximation_error(const Unitary& u, const Unitary& v,
                                       std::span<const StateVector> probes);
/// Uses default_probes(u.dim(), seed).
ApproximationError approximation_error(const Unitary& u, const Unitary& v,
                                       std::uint64_t seed = 0);

/// All 2^n basis states followed by 64 seeded Haar-random states.
std::vector<StateVector> default_probes(std::size_t dim, std::uint64_t seed);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// I (x) ... (x) op (x) ... (x) I with `op` (2x2) on `target`.
Matrix embed_single(const Matrix& op, std::size_t target, std::size_t n_qubits);

}  // namespace qtk
