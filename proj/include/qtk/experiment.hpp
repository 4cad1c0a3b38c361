#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "qtk/pathint.hpp"

namespace qtk::cli {

/// Path-integral experiment read from a JSON descriptor:
///
///   {
///     "lattice": {"n_slices": 2, "n_sites": 401, "dx": 1, "dt": 127.3,
///                 "mass": 1, "hbar": 1, "charge": 1, "light_speed": 1,
///                 "boundary": "reflecting" | "periodic"},
///     "potential": "free" | [V_0, ...] |
///                  {"profile": "harmonic", "omega": w, "center": site} |
///                  {"profile": "barrier", "height": h, "first": i, "last": j},
///     "vector_potential": [A_0, ...],
///     "source": site,
///     "packet": {"center": site, "width": w, "momentum": p},
///     "slits": {"gate_slice": 1, "a": [first, last], "b": [first, last]},
///     "flux": phi,            // or "phase": radians, applied to slit b
///     "record_slices": [0, 1],
///     "renormalize": true
///   }
///
/// Quantities are in the lattice's own units (hbar = m = 1 unless given).
struct Experiment {
  pathint::PathLattice lattice;
  std::optional<std::size_t> source;
  std::optional<pathint::WavePacket> packet;
  std::optional<pathint::DoubleSlit> slits;
  double flux = 0.0;
  std::optional<double> phase;
  std::vector<std::size_t> record_slices;
  bool renormalize = true;

  /// Slit-b phase: the explicit "phase" if given, else ab_phase(lattice, flux).
  double slit_phase() const;
};

/// Throws DomainError naming the offending key.
Experiment experiment_from_json(const nlohmann::json& doc);

}  // namespace qtk::cli
