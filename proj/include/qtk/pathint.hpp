#pragma once

#include <span>
#include <vector>

#include "qtk/core.hpp"

namespace qtk::pathint {

enum class Boundary {
  /// Hard walls: paths stay on the lattice sites.
  Reflecting,
  /// Sites wrap; displacements use the minimum image.
  Periodic,
};

/// Discretized 1-D space-time. Site i sits at x = i * dx; slice k at t = k * dt.
struct PathLattice {
  std::size_t n_slices = 1;
  std::size_t n_sites = 2;
  double dx = 1.0;
  double dt = 1.0;
  double mass = 1.0;
  double hbar = 1.0;
  /// Per-site potential energy; empty means V = 0.
  std::vector<double> potential;
  /// Per-site vector potential; empty means A = 0.
  std::vector<double> vector_potential;
  double charge = 1.0;
  double light_speed = 1.0;
  Boundary boundary = Boundary::Reflecting;

  /// Throws DomainError unless n_slices >= 1, n_sites >= 2, dx, dt, mass,
  /// hbar > 0 and any per-site arrays have n_sites entries.
  void validate() const;

  double position(std::size_t site) const { return static_cast<double>(site) * dx; }
  /// Displacement x_to - x_from, minimum image under periodic boundaries.
  double displacement(std::size_t from, std::size_t to) const;
  double potential_at(std::size_t site) const;
  double vector_potential_at(std::size_t site) const;
  bool has_vector_potential() const;
};

/// One site index per slice, n_slices + 1 entries.
struct Path {
  std::vector<std::size_t> sites;
};

/// Amplitudes on every site of one time slice.
struct AmplitudeField {
  std::vector<Amplitude> values;
  double dx = 1.0;

  std::size_t size() const { return values.size(); }
  /// sum_i |psi_i|^2 dx
  double total_probability() const;
  std::vector<double> probability() const;
};

struct SiteRange {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
  bool contains(std::size_t site) const { return site >= first && site <= last; }
};

/// Action of one segment from site `from` to site `to` over dt:
/// [m/2 (dx/dt)^2 - V(x_from) + (e/c) A(x_from) dx/dt] dt.
double segment_action(const PathLattice& lattice, std::size_t from, std::size_t to);

/// Sum of segment actions along the path.
double action(const Path& path, const PathLattice& lattice);

/// Per-step normalization sqrt(m / (2 pi i hbar dt)), principal branch.
Amplitude step_normalization(const PathLattice& lattice);

/// One-step kernel K(to <- from) = N0 exp(i S_segment / hbar).
Amplitude kernel(const PathLattice& lattice, std::size_t from, std::size_t to);

/// psi'(x') = sum_x K(x' <- x) psi(x) dx. Each target site is accumulated in a
/// fixed order with compensated summation.
AmplitudeField step(const PathLattice& lattice, const AmplitudeField& field);

/// Amplitude <x, T | source, 0> on every final-slice site: the first slice is
/// the kernel row from `source`, every later slice one more convolution.
AmplitudeField propagate(const PathLattice& lattice, std::size_t source);

/// Same lattice, time order reversed: amplitude to arrive at each slice-0 site
/// when starting from `sink` on the final slice. Each segment contributes
/// exp(-i S / hbar) with the normalization of a negative time step.
AmplitudeField propagate_reversed(const PathLattice& lattice, std::size_t sink);

/// Propagation from `source` with amplitudes outside the gate zeroed at
/// slice `gate_slice` (1 <= gate_slice < n_slices). `transmission[i]` is the
/// complex factor applied to site i at the gate (0 blocks it).
AmplitudeField propagate_gated(const PathLattice& lattice, std::size_t source,
                               std::size_t gate_slice, std::span<const Amplitude> transmission);

/// Superposition over intermediate sites: only `open_sites` pass at gate_slice.
AmplitudeField compose_amplitudes(const PathLattice& lattice, std::size_t source,
                                  std::size_t gate_slice, std::span<const std::size_t> open_sites);

struct PropagationOptions {
  bool renormalize = true;
  /// Slices to keep in the result, in addition to the final one.
  std::vector<std::size_t> record_slices;
};

struct PropagationResult {
  /// Recorded slices, paired with their slice index, final slice last.
  std::vector<std::pair<std::size_t, AmplitudeField>> slices;
  /// Factor applied by the renormalization pass after each step (1 if disabled).
  std::vector<double> renormalization;

  const AmplitudeField& final_field() const { return slices.back().second; }
};

/// Evolves an initial field through all n_slices steps. With renormalize set,
/// each step's output is rescaled to unit total probability and the factor kept.
PropagationResult propagate_field(const PathLattice& lattice, const AmplitudeField& initial,
                                  const PropagationOptions& options = {});

/// Gaussian packet exp(-(x - x0)^2 / (4 width^2) + i momentum x / hbar),
/// normalized on the lattice.
struct WavePacket {
  std::size_t center = 0;
  double width = 1.0;
  double momentum = 0.0;
};

AmplitudeField make_packet(const PathLattice& lattice, const WavePacket& packet);

/// Endpoint of the least-action (Newtonian) trajectory started at the packet
/// center with velocity momentum / mass, integrated by velocity Verlet over
/// the lattice's n_slices * dt with the finite-difference force -dV/dx.
double least_action_endpoint(const PathLattice& lattice, const WavePacket& packet);

/// Sites within `half_width` sites of position x, clipped to the lattice.
SiteRange window_around(const PathLattice& lattice, double x, std::size_t half_width);

/// For each hbar (strictly decreasing, positive) the fraction of final-slice
/// probability inside `window` after propagating the packet.
std::vector<double> classical_concentration(const PathLattice& lattice, const WavePacket& packet,
                                            SiteRange window,
                                            std::span<const double> hbar_sequence);

/// e * flux / (hbar * c) reduced to [0, 2 pi).
double ab_phase(const PathLattice& lattice, double loop_flux);

struct DoubleSlit {
  std::size_t gate_slice = 1;
  SiteRange slit_a;
  SiteRange slit_b;
};

struct DoubleSlitPattern {
  AmplitudeField both;
  AmplitudeField only_a;
  AmplitudeField only_b;
};

/// Screen amplitudes with both slits open and with each slit alone. The
/// branch through slit b picks up exp(i phase_b) (Aharonov-Bohm shift).
DoubleSlitPattern double_slit(const PathLattice& lattice, std::size_t source,
                              const DoubleSlit& slits, double phase_b = 0.0);

struct Extrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

/// Strict interior local maxima and minima of a sampled profile.
Extrema interior_extrema(std::span<const double> profile);

}  // namespace qtk::pathint
