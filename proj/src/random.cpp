#include "qtk/random.hpp"

#include <cmath>

namespace qtk {

StateVector haar_state(std::size_t n_qubits, Rng& rng) {
  if (n_qubits > kMaxQubits) throw DomainError("register too large");
  std::vector<Amplitude> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) {
    const double re = rng.normal();
    a = {re, rng.normal()};
  }
  const double nrm = norm(amps);
  for (auto& a : amps) a /= nrm;
  return StateVector::from_amplitudes(std::move(amps));
}

Axis random_axis(Rng& rng) {
  for (;;) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    if (x * x + y * y + z * z > 1e-12) return Axis::normalized(x, y, z);
  }
}

Observable random_hermitian(std::size_t dim, Rng& rng) {
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double re = rng.normal();
      m(i, j) = {re, rng.normal()};
    }
  }
  Matrix h = (m + m.adjoint()) * 0.5;
  // Force exact Hermiticity; the sum above is only symmetric up to rounding.
  for (std::size_t i = 0; i < dim; ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < dim; ++j) h(j, i) = std::conj(h(i, j));
  }
  return Observable(std::move(h));
}

}  // namespace qtk
