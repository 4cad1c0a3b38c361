#pragma once

#include "qtk/gates.hpp"
#include "qtk/rng.hpp"
#include "qtk/statevec.hpp"

namespace qtk {

/// Haar-distributed pure state: i.i.d. complex Gaussian components, normalized.
StateVector haar_state(std::size_t n_qubits, Rng& rng);

/// Uniform direction on the unit sphere.
Axis random_axis(Rng& rng);

/// (M + M^dagger) / 2 for M with i.i.d. complex Gaussian entries.
Observable random_hermitian(std::size_t dim, Rng& rng);

}  // namespace qtk
