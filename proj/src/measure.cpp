#include "qtk/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qtk {
namespace {

// Outcomes below this Born weight are treated as round-off and not reported.
constexpr double kNegligibleProbability = 1e-14;

Vector to_vector(const StateVector& state) {
  Vector v(static_cast<Eigen::Index>(state.dim()));
  for (std::size_t i = 0; i < state.dim(); ++i) v(static_cast<Eigen::Index>(i)) = state[i];
  return v;
}

void require_same_dim(const StateVector& state, const Observable& a) {
  if (state.dim() != a.dim()) {
    throw DomainError("observable dimension " + std::to_string(a.dim()) +
                      " does not match state dimension " + std::to_string(state.dim()));
  }
}

StateVector normalized_state(const Vector& v, double nrm) {
  std::vector<Amplitude> amps(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) amps[static_cast<std::size_t>(i)] = v(i) / nrm;
  return StateVector::from_amplitudes(std::move(amps));
}

const MeasurementOutcome& sample(const std::vector<MeasurementOutcome>& outcomes, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (const auto& o : outcomes) {
    cumulative += o.probability;
    if (u < cumulative) return o;
  }
  return outcomes.back();
}

Matrix hermitize(const Matrix& m) {
  Matrix h = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    h(i, i) = m(i, i).real();
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const Amplitude avg = (m(i, j) + std::conj(m(j, i))) * 0.5;
      h(i, j) = avg;
      h(j, i) = std::conj(avg);
    }
  }
  return h;
}

}  // namespace

double expectation(const StateVector& state, const Observable& a) {
  require_same_dim(state, a);
  const Vector psi = to_vector(state);
  const Amplitude value = psi.dot(a.matrix() * psi);  // dot conjugates the left operand
  if (std::abs(value.imag()) > 1e-10 * std::max(1.0, a.matrix().cwiseAbs().maxCoeff())) {
    throw DomainError("expectation value has a non-negligible imaginary part");
  }
  return value.real();
}

double uncertainty(const StateVector& state, const Observable& a) {
  require_same_dim(state, a);
  const Vector psi = to_vector(state);
  const Vector a_psi = a.matrix() * psi;
  const double mean = psi.dot(a_psi).real();
  const double second = a_psi.squaredNorm();
  return std::sqrt(std::max(0.0, second - mean * mean));
}

UncertaintyBound uncertainty_bound(const StateVector& state, const Observable& a,
                                   const Observable& b) {
  require_same_dim(state, a);
  require_same_dim(state, b);
  const Vector psi = to_vector(state);
  const Matrix commutator = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  const Amplitude c = psi.dot(commutator * psi);
  return {uncertainty(state, a) * uncertainty(state, b), 0.5 * std::abs(c)};
}

std::vector<SpectralProjector> spectral_projectors(const Observable& a, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.matrix());
  if (eig.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const Matrix& vectors = eig.eigenvectors();
  std::vector<SpectralProjector> out;
  Eigen::Index start = 0;
  while (start < values.size()) {
    Eigen::Index end = start + 1;
    while (end < values.size() && values(end) - values(start) <= tol) ++end;
    SpectralProjector p;
    p.eigenvalue = values.segment(start, end - start).mean();
    p.eigenvectors = vectors.middleCols(start, end - start);
    out.push_back(std::move(p));
    start = end;
  }
  return out;
}

std::vector<MeasurementOutcome> outcome_distribution(const StateVector& state,
                                                     const Observable& a) {
  require_same_dim(state, a);
  const Vector psi = to_vector(state);
  std::vector<MeasurementOutcome> out;
  for (const auto& proj : spectral_projectors(a)) {
    const Vector projected = proj.eigenvectors * (proj.eigenvectors.adjoint() * psi);
    const double p = projected.squaredNorm();
    if (p <= kNegligibleProbability) continue;
    out.push_back({proj.eigenvalue, p, normalized_state(projected, std::sqrt(p))});
  }
  return out;
}

MeasurementOutcome measure_projective(const StateVector& state, const Observable& a, Rng& rng) {
  return sample(outcome_distribution(state, a), rng);
}

std::vector<MeasurementOutcome> qubit_outcome_distribution(const StateVector& state,
                                                           const Observable& single,
                                                           std::size_t target) {
  if (single.dim() != 2) throw DomainError("qubit measurement needs a 2x2 observable");
  const std::size_t stride = state.qubit_mask(target);
  const auto projectors = spectral_projectors(single);
  if (projectors.size() == 1) {
    // Multiple of the identity: a single certain outcome, state untouched.
    return {{projectors.front().eigenvalue, 1.0, state}};
  }
  std::vector<MeasurementOutcome> out;
  const auto amps = state.amplitudes();
  for (const auto& proj : projectors) {
    const Amplitude v0 = proj.eigenvectors(0, 0);
    const Amplitude v1 = proj.eigenvectors(1, 0);
    std::vector<Amplitude> projected(amps.size());
    double p = 0.0;
    for (std::size_t i0 = 0; i0 < amps.size(); ++i0) {
      if (i0 & stride) continue;
      const std::size_t i1 = i0 | stride;
      const Amplitude overlap = std::conj(v0) * amps[i0] + std::conj(v1) * amps[i1];
      projected[i0] = v0 * overlap;
      projected[i1] = v1 * overlap;
      p += std::norm(overlap);
    }
    if (p <= kNegligibleProbability) continue;
    const double nrm = std::sqrt(p);
    for (auto& x : projected) x /= nrm;
    out.push_back({proj.eigenvalue, p, StateVector::from_amplitudes(std::move(projected))});
  }
  return out;
}

MeasurementOutcome measure_qubit(const StateVector& state, const Observable& single,
                                 std::size_t target, Rng& rng) {
  return sample(qubit_outcome_distribution(state, single, target), rng);
}

DensityMatrix::DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() ||
      !is_power_of_two(static_cast<std::size_t>(entries_.rows()))) {
    throw DomainError("density matrix must be square with power-of-two dimension");
  }
  if (!entries_.allFinite()) throw DomainError("density matrix has non-finite entries");
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw DomainError("density matrix is not Hermitian");
  }
  const Amplitude tr = entries_.trace();
  if (std::abs(tr - 1.0) > kNormTolerance) {
    throw DomainError("density matrix trace " + std::to_string(tr.real()) + " is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -kNormTolerance) {
    throw DomainError("density matrix is not positive semidefinite");
  }
}

DensityMatrix density_from_state(const StateVector& state) {
  const Vector psi = to_vector(state);
  return DensityMatrix(hermitize(psi * psi.adjoint()));
}

DensityMatrix density_from_ensemble(std::span<const EnsembleMember> members) {
  if (members.empty()) throw DomainError("ensemble is empty");
  const std::size_t dim = members.front().state.dim();
  double total = 0.0;
  for (const auto& m : members) {
    if (!(m.probability >= 0.0) || !std::isfinite(m.probability)) {
      throw DomainError("ensemble probabilities must be non-negative");
    }
    if (m.state.dim() != dim) throw DomainError("ensemble states differ in dimension");
    total += m.probability;
  }
  if (std::abs(total - 1.0) > kNormTolerance) throw DomainError("ensemble probabilities must sum to 1");
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix rho = Matrix::Zero(d, d);
  for (const auto& m : members) {
    const Vector psi = to_vector(m.state);
    rho += m.probability * (psi * psi.adjoint());
  }
  return DensityMatrix(hermitize(rho));
}

double expectation_density(const DensityMatrix& rho, const Observable& a) {
  if (rho.dim() != a.dim()) throw DomainError("expectation_density: dimension mismatch");
  return (rho.matrix() * a.matrix()).trace().real();
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.matrix().cwiseAbs2().sum();
}

DensityMatrix dephase(const DensityMatrix& rho, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("dephasing lambda must lie in [0, 1]");
  Matrix out = rho.matrix();
  const double keep = 1.0 - lambda;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      if (i != j) out(i, j) *= keep;
    }
  }
  return DensityMatrix(std::move(out));
}

double dephasing_lambda(double elapsed, double coherence_time) {
  if (!(coherence_time > 0.0)) throw DomainError("coherence time must be positive");
  if (!(elapsed >= 0.0)) throw DomainError("elapsed time must be non-negative");
  return -std::expm1(-elapsed / coherence_time);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const std::size_t n = rho.n_qubits();
  if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw DomainError("partial_trace: duplicate qubit in keep set");
  }
  if (kept.back() >= n) throw DomainError("partial_trace: qubit out of range");
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  // Full-register offset contributed by a sub-register index over `qubits`.
  auto offsets = [n](const std::vector<std::size_t>& qubits) {
    const std::size_t m = qubits.size();
    std::vector<std::size_t> off(std::size_t{1} << m, 0);
    for (std::size_t idx = 0; idx < off.size(); ++idx) {
      for (std::size_t k = 0; k < m; ++k) {
        if ((idx >> (m - 1 - k)) & 1U) off[idx] |= std::size_t{1} << (n - 1 - qubits[k]);
      }
    }
    return off;
  };
  const auto keep_off = offsets(kept);
  const auto trace_off = offsets(traced);
  const auto d = static_cast<Eigen::Index>(keep_off.size());
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Amplitude sum{0.0, 0.0};
      for (const std::size_t r : trace_off) {
        sum += rho.matrix()(static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(i)] | r),
                            static_cast<Eigen::Index>(keep_off[static_cast<std::size_t>(j)] | r));
      }
      out(i, j) = sum;
    }
  }
  return DensityMatrix(hermitize(out));
}

}  // namespace qtk
