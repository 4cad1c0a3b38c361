#include "qtk/statevec.hpp"

#include <cmath>
#include <numeric>

namespace qtk {

StateVector::StateVector() : n_qubits_(0), amplitudes_{Amplitude{1.0, 0.0}} {}

StateVector::StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

StateVector StateVector::basis(std::size_t n_qubits, BasisIndex index) {
  if (n_qubits > kMaxQubits) {
    throw DomainError("register of " + std::to_string(n_qubits) + " qubits exceeds the limit of " +
                      std::to_string(kMaxQubits));
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index.value >= dim) {
    throw DomainError("basis index " + std::to_string(index.value) + " out of range for " +
                      std::to_string(n_qubits) + " qubits");
  }
  std::vector<Amplitude> amps(dim);
  amps[index.value] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  if (!is_power_of_two(amplitudes.size())) {
    throw DomainError("amplitude count " + std::to_string(amplitudes.size()) +
                      " is not a power of two");
  }
  const std::size_t n = log2_exact(amplitudes.size());
  if (n > kMaxQubits) throw DomainError("register too large");
  for (const auto& a : amplitudes) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw DomainError("non-finite amplitude");
    }
  }
  const double nrm = norm(amplitudes);
  if (std::abs(nrm - 1.0) > kRenormalizeWindow) {
    throw DomainError("state norm " + std::to_string(nrm) + " is not within 1e-6 of 1");
  }
  if (std::abs(nrm - 1.0) > 0.0) {
    for (auto& a : amplitudes) a /= nrm;
  }
  return StateVector(n, std::move(amplitudes));
}

std::uint64_t StateVector::qubit_mask(std::size_t qubit) const {
  if (qubit >= n_qubits_) {
    throw DomainError("qubit " + std::to_string(qubit) + " out of range for " +
                      std::to_string(n_qubits_) + "-qubit register");
  }
  return std::uint64_t{1} << (n_qubits_ - 1 - qubit);
}

StateVector from_bloch(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return StateVector::from_amplitudes({Amplitude{c, 0.0}, std::polar(1.0, phi) * s});
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() + b.n_qubits() > kMaxQubits) throw DomainError("register too large");
  std::vector<Amplitude> out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < b.dim(); ++j) {
      out[i * b.dim() + j] = a[i] * b[j];
    }
  }
  return StateVector::from_amplitudes(std::move(out));
}

Amplitude inner(const StateVector& bra, const StateVector& ket) {
  if (bra.n_qubits() != ket.n_qubits()) {
    throw DomainError("inner product of " + std::to_string(bra.n_qubits()) + "- and " +
                      std::to_string(ket.n_qubits()) + "-qubit states");
  }
  Amplitude sum{0.0, 0.0};
  for (std::size_t i = 0; i < bra.dim(); ++i) sum += std::conj(bra[i]) * ket[i];
  return sum;
}

double norm(std::span<const Amplitude> amplitudes) {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

double norm(const StateVector& state) { return norm(state.amplitudes()); }

std::vector<double> probabilities(const StateVector& state) {
  std::vector<double> p(state.dim());
  for (std::size_t i = 0; i < state.dim(); ++i) p[i] = std::norm(state[i]);
  return p;
}

std::string basis_label(BasisIndex index, std::size_t n_qubits) {
  std::string label(n_qubits, '0');
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if ((index.value >> (n_qubits - 1 - q)) & 1U) label[q] = '1';
  }
  return label;
}

}  // namespace qtk
