#pragma once

#include <span>
#include <vector>

#include "qtk/gates.hpp"
#include "qtk/rng.hpp"
#include "qtk/statevec.hpp"

namespace qtk {

/// Re <psi|A|psi>. The imaginary part must vanish to 1e-10.
double expectation(const StateVector& state, const Observable& a);

/// sqrt(<A^2> - <A>^2), clamped at zero.
double uncertainty(const StateVector& state, const Observable& a);

struct UncertaintyBound {
  double lhs = 0.0;  // dA * dB
  double rhs = 0.0;  // |<[A, B]>| / 2
};

UncertaintyBound uncertainty_bound(const StateVector& state, const Observable& a,
                                   const Observable& b);

/// One distinct eigenvalue of an observable and an orthonormal basis
/// (columns) of its eigenspace.
struct SpectralProjector {
  double eigenvalue = 0.0;
  Matrix eigenvectors;

  Matrix projector() const { return eigenvectors * eigenvectors.adjoint(); }
};

/// Eigenvalues closer than 1e-9 share one projector. Sorted by eigenvalue.
std::vector<SpectralProjector> spectral_projectors(const Observable& a,
                                                   double tol = kDegeneracyTolerance);

struct MeasurementOutcome {
  double eigenvalue = 0.0;
  double probability = 0.0;
  StateVector post_state;
};

/// Every outcome with non-zero probability, in ascending eigenvalue order,
/// with the collapsed state P_a psi / ||P_a psi||.
std::vector<MeasurementOutcome> outcome_distribution(const StateVector& state,
                                                     const Observable& a);

/// Samples one outcome with Born-rule weight ||P_a psi||^2 and collapses.
MeasurementOutcome measure_projective(const StateVector& state, const Observable& a, Rng& rng);

/// Single-qubit observable acting on `target`, identity elsewhere. Works on
/// amplitude pairs; no 2^n matrix is built.
std::vector<MeasurementOutcome> qubit_outcome_distribution(const StateVector& state,
                                                           const Observable& single,
                                                           std::size_t target);
MeasurementOutcome measure_qubit(const StateVector& state, const Observable& single,
                                 std::size_t target, Rng& rng);

/// Mixed-state operator. Invariants: Hermitian within 1e-12, unit trace
/// within 1e-10, eigenvalues >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  std::size_t n_qubits() const { return log2_exact(dim()); }
  const Matrix& matrix() const { return entries_; }
  Amplitude operator()(std::size_t row, std::size_t col) const { return entries_(row, col); }

 private:
  Matrix entries_;
};

struct EnsembleMember {
  double probability = 0.0;
  StateVector state;
};

DensityMatrix density_from_state(const StateVector& state);

/// rho = sum_k p_k |psi_k><psi_k|. Requires p_k >= 0 summing to 1 within 1e-10.
DensityMatrix density_from_ensemble(std::span<const EnsembleMember> members);

/// Re Tr(rho A)
double expectation_density(const DensityMatrix& rho, const Observable& a);

/// Tr(rho^2)
double purity(const DensityMatrix& rho);

/// Scales every off-diagonal entry by (1 - lambda), lambda in [0, 1].
DensityMatrix dephase(const DensityMatrix& rho, double lambda);

/// lambda = 1 - exp(-elapsed / coherence_time).
double dephasing_lambda(double elapsed, double coherence_time);

/// Traces out every qubit not in `keep`. Kept qubits retain their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

}  // namespace qtk
