#pragma once

#include <array>
#include <span>
#include <vector>

#include "qtk/gates.hpp"
#include "qtk/rng.hpp"
#include "qtk/statevec.hpp"

namespace qtk {

/// Split of a register into two non-empty complementary qubit sets.
class Bipartition {
 public:
  static Bipartition from_side_a(std::size_t n_qubits, std::vector<std::size_t> side_a);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<std::size_t>& side_a() const { return side_a_; }
  const std::vector<std::size_t>& side_b() const { return side_b_; }

 private:
  Bipartition() = default;

  std::size_t n_qubits_ = 0;
  std::vector<std::size_t> side_a_;
  std::vector<std::size_t> side_b_;
};

/// (|01> - |10>) / sqrt(2)
StateVector singlet();

/// Uniform-magnitude state 2^{-n/2} sum_i e^{i phase_i} |i>, with phase_0 = 0
/// and `phases` supplying the remaining 2^n - 1 relative phases.
StateVector max_entangled(std::size_t n_qubits, std::span<const double> phases);

/// Singular values of the amplitude matrix reshaped to 2^|A| x 2^|B|, descending.
std::vector<double> schmidt_coefficients(const StateVector& state, const Bipartition& cut);

/// Number of Schmidt coefficients above `tol`. 1 iff the state factorizes.
std::size_t schmidt_rank(const StateVector& state, const Bipartition& cut, double tol = 1e-9);

/// Joint outcome probabilities for measuring qubit 0 along axis a and qubit 1
/// along axis b. Index [i][j], i/j = 0 for +1 and 1 for -1.
using JointDistribution = std::array<std::array<double, 2>, 2>;

enum class MeasureOrder { QubitAFirst, QubitBFirst };

/// Sequential projective measurement on a two-qubit state, collapsing after the first.
JointDistribution joint_distribution(const StateVector& two_qubit, const Axis& axis_a,
                                     const Axis& axis_b,
                                     MeasureOrder order = MeasureOrder::QubitAFirst);

/// <(n_a . sigma) (x) (n_b . sigma)> on the singlet, axes in the x-z plane at
/// the given angles from z, evaluated from the projector distribution.
double epr_correlation(double angle_a, double angle_b);
double epr_correlation(const Axis& axis_a, const Axis& axis_b);

struct EprRecord {
  double angle_a = 0.0;
  double angle_b = 0.0;
  std::size_t shots = 0;
  /// counts[i][j], i/j = 0 for +1 and 1 for -1.
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t n_pp() const { return counts[0][0]; }
  std::size_t n_pm() const { return counts[0][1]; }
  std::size_t n_mp() const { return counts[1][0]; }
  std::size_t n_mm() const { return counts[1][1]; }
  double empirical_correlation() const;
  /// Fraction of shots where observer B saw +1.
  double marginal_b_plus() const;
};

/// Each shot prepares a singlet, measures qubit 0 along angle_a (collapsing),
/// then qubit 1 along angle_b. Shot k draws from rng.substream(k).
EprRecord epr_sample(double angle_a, double angle_b, std::size_t shots, const Rng& rng);

/// Delayed choice: after each shot's state is prepared, observer A's angle is
/// taken from `schedule_a` (shot k uses entry k mod size). One record per
/// schedule entry, holding the shots that used it.
std::vector<EprRecord> epr_sample_delayed(std::span<const double> schedule_a, double angle_b,
                                          std::size_t shots, const Rng& rng);

/// 1 - |<psi (x) psi | C psi>|^2 for the linear map C: |0> -> |00>, |1> -> |11>.
double no_cloning_witness(const StateVector& qubit);

}  // namespace qtk
