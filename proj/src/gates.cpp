#include "qtk/gates.hpp"

#include <cmath>

#include "parallel.hpp"
#include "qtk/random.hpp"

namespace qtk {
namespace {

constexpr Amplitude kI{0.0, 1.0};

void require_square_pow2(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || !is_power_of_two(static_cast<std::size_t>(m.rows()))) {
    throw DomainError(std::string(what) + " must be square with power-of-two dimension");
  }
  if (!m.allFinite()) throw DomainError(std::string(what) + " has non-finite entries");
}

double max_abs_entry(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void require_gate_dim(const Unitary& gate, std::size_t dim) {
  if (gate.dim() != dim) {
    throw DomainError("expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                      " gate, got dimension " + std::to_string(gate.dim()));
  }
}

// Index with a zero inserted at bit position `bit` (counting from the LSB).
inline std::size_t insert_zero_bit(std::size_t i, std::size_t bit) {
  const std::size_t low = i & ((std::size_t{1} << bit) - 1);
  return ((i >> bit) << (bit + 1)) | low;
}

}  // namespace

Unitary::Unitary(Matrix entries) : entries_(std::move(entries)) {
  require_square_pow2(entries_, "unitary");
  const Matrix defect = entries_.adjoint() * entries_ - Matrix::Identity(entries_.rows(), entries_.cols());
  if (max_abs_entry(defect) > kUnitaryTolerance) {
    throw DomainError("matrix is not unitary (max |U^dagger U - I| = " +
                      std::to_string(max_abs_entry(defect)) + ")");
  }
}

Unitary Unitary::identity(std::size_t dim) {
  return Unitary(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

Observable::Observable(Matrix entries) : entries_(std::move(entries)) {
  require_square_pow2(entries_, "observable");
  if (max_abs_entry(entries_ - entries_.adjoint()) > kHermitianTolerance) {
    throw DomainError("observable is not Hermitian");
  }
}

Axis::Axis(double nx, double ny, double nz) : nx_(nx), ny_(ny), nz_(nz) {
  if (!std::isfinite(nx) || !std::isfinite(ny) || !std::isfinite(nz) ||
      std::abs(nx * nx + ny * ny + nz * nz - 1.0) > 1e-12) {
    throw DomainError("axis is not a unit vector");
  }
}

Axis Axis::normalized(double nx, double ny, double nz) {
  const double len = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("cannot normalize a zero axis");
  return Axis(nx / len, ny / len, nz / len);
}

Axis Axis::in_xz_plane(double angle) { return Axis::normalized(std::sin(angle), 0.0, std::cos(angle)); }

Matrix pauli_matrix(Pauli which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case Pauli::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case Pauli::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

Unitary pauli(Pauli which) { return Unitary(pauli_matrix(which)); }

Observable pauli_observable(Pauli which) { return Observable(pauli_matrix(which)); }

Observable spin_observable(const Axis& axis) {
  Matrix m(2, 2);
  m(0, 0) = axis.nz();
  m(1, 1) = -axis.nz();
  m(0, 1) = Amplitude{axis.nx(), -axis.ny()};
  m(1, 0) = Amplitude{axis.nx(), axis.ny()};
  return Observable(std::move(m));
}

Unitary rotation_gate(const Axis& axis, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  // cos I + i sin (n . sigma), written out entrywise.
  Matrix m(2, 2);
  m(0, 0) = Amplitude{c, s * axis.nz()};
  m(1, 1) = Amplitude{c, -s * axis.nz()};
  m(0, 1) = kI * s * Amplitude{axis.nx(), -axis.ny()};
  m(1, 0) = kI * s * Amplitude{axis.nx(), axis.ny()};
  return Unitary(std::move(m));
}

Unitary evolve(const Observable& h, double t, double hbar) {
  if (!(hbar > 0.0)) throw DomainError("hbar must be positive");
  if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h.matrix());
  if (eig.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, -lambda(k) * t / hbar);
  const Matrix& v = eig.eigenvectors();
  return Unitary(v * phases.asDiagonal() * v.adjoint());
}

Unitary compose(const Unitary& u, const Unitary& v) {
  if (u.dim() != v.dim()) throw DomainError("compose: dimension mismatch");
  return Unitary(u.matrix() * v.matrix());
}

void apply_single_in_place(StateVector& state, const Unitary& gate, std::size_t target) {
  require_gate_dim(gate, 2);
  (void)state.qubit_mask(target);  // range check
  const std::size_t bit = state.n_qubits() - 1 - target;
  const std::size_t stride = std::size_t{1} << bit;
  const Amplitude g00 = gate.matrix()(0, 0), g01 = gate.matrix()(0, 1);
  const Amplitude g10 = gate.matrix()(1, 0), g11 = gate.matrix()(1, 1);
  auto amps = state.mutable_amplitudes();
  detail::parallel_for(amps.size() / 2, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const std::size_t i0 = insert_zero_bit(p, bit);
      const std::size_t i1 = i0 | stride;
      const Amplitude a0 = amps[i0];
      const Amplitude a1 = amps[i1];
      amps[i0] = g00 * a0 + g01 * a1;
      amps[i1] = g10 * a0 + g11 * a1;
    }
  });
}

StateVector apply_single(StateVector state, const Unitary& gate, std::size_t target) {
  apply_single_in_place(state, gate, target);
  return state;
}

void apply_controlled_in_place(StateVector& state, const Unitary& gate, std::size_t control,
                               std::size_t target) {
  require_gate_dim(gate, 2);
  if (control == target) throw DomainError("control and target must differ");
  const std::size_t n = state.n_qubits();
  (void)state.qubit_mask(control);  // range checks
  (void)state.qubit_mask(target);
  const std::size_t cbit = n - 1 - control;
  const std::size_t tbit = n - 1 - target;
  const std::size_t lo = std::min(cbit, tbit);
  const std::size_t hi = std::max(cbit, tbit);
  const std::size_t cmask = std::size_t{1} << cbit;
  const std::size_t tmask = std::size_t{1} << tbit;
  const Amplitude g00 = gate.matrix()(0, 0), g01 = gate.matrix()(0, 1);
  const Amplitude g10 = gate.matrix()(1, 0), g11 = gate.matrix()(1, 1);
  auto amps = state.mutable_amplitudes();
  // Each of the 2^(n-2) quadruples contributes one pair: control set, target 0/1.
  detail::parallel_for(amps.size() / 4, [&](std::size_t begin, std::size_t end) {
    for (std::size_t q = begin; q < end; ++q) {
      const std::size_t base = insert_zero_bit(insert_zero_bit(q, lo), hi);
      const std::size_t i0 = base | cmask;
      const std::size_t i1 = i0 | tmask;
      const Amplitude a0 = amps[i0];
      const Amplitude a1 = amps[i1];
      amps[i0] = g00 * a0 + g01 * a1;
      amps[i1] = g10 * a0 + g11 * a1;
    }
  });
}

StateVector apply_controlled(StateVector state, const Unitary& gate, std::size_t control,
                             std::size_t target) {
  apply_controlled_in_place(state, gate, control, target);
  return state;
}

StateVector apply_dense(const StateVector& state, const Unitary& gate) {
  if (gate.dim() != state.dim()) throw DomainError("apply_dense: dimension mismatch");
  Vector psi(static_cast<Eigen::Index>(state.dim()));
  for (std::size_t i = 0; i < state.dim(); ++i) psi(static_cast<Eigen::Index>(i)) = state[i];
  const Vector out = gate.matrix() * psi;
  return StateVector::from_amplitudes(std::vector<Amplitude>(out.data(), out.data() + out.size()));
}

ApproximationError approximation_error(const Unitary& u, const Unitary& v,
                                       std::span<const StateVector> probes) {
  if (u.dim() != v.dim()) throw DomainError("approximation_error: dimension mismatch");
  const Matrix diff = u.matrix() - v.matrix();
  ApproximationError out;
  for (const auto& probe : probes) {
    if (probe.dim() != u.dim()) throw DomainError("probe dimension does not match the gates");
    Amplitude s{0.0, 0.0};
    for (std::size_t i = 0; i < probe.dim(); ++i) {
      Amplitude row{0.0, 0.0};
      for (std::size_t j = 0; j < probe.dim(); ++j) {
        row += diff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * probe[j];
      }
      s += std::conj(probe[i]) * row;
    }
    out.probe_max = std::max(out.probe_max, std::norm(s));
  }
  Eigen::JacobiSVD<Matrix> svd(diff);
  const double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  out.spectral_bound = sigma_max * sigma_max;
  return out;
}

ApproximationError approximation_error(const Unitary& u, const Unitary& v, std::uint64_t seed) {
  const auto probes = default_probes(u.dim(), seed);
  return approximation_error(u, v, probes);
}

std::vector<StateVector> default_probes(std::size_t dim, std::uint64_t seed) {
  if (!is_power_of_two(dim)) throw DomainError("probe dimension must be a power of two");
  const std::size_t n = log2_exact(dim);
  std::vector<StateVector> probes;
  probes.reserve(dim + 64);
  for (std::size_t i = 0; i < dim; ++i) probes.push_back(StateVector::basis(n, {i}));
  Rng rng(seed);
  for (int k = 0; k < 64; ++k) probes.push_back(haar_state(n, rng));
  return probes;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix embed_single(const Matrix& op, std::size_t target, std::size_t n_qubits) {
  if (op.rows() != 2 || op.cols() != 2) throw DomainError("embed_single needs a 2x2 operator");
  if (target >= n_qubits) throw DomainError("target qubit out of range");
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    out = kron(out, q == target ? op : Matrix::Identity(2, 2));
  }
  return out;
}

}  // namespace qtk
