#include "qtk/pathint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace qtk::pathint {
namespace {

using std::numbers::pi;

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Amplitude v) {
    add_part(re_, re_c_, v.real());
    add_part(im_, im_c_, v.imag());
  }
  Amplitude value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& sum, double& comp, double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
};

void require_site(const PathLattice& lattice, std::size_t site, const char* what) {
  if (site >= lattice.n_sites) {
    throw DomainError(std::string(what) + " site " + std::to_string(site) + " outside lattice of " +
                      std::to_string(lattice.n_sites) + " sites");
  }
}

// Site distance used by the kinetic term: plain |i - j|, or the minimum image.
std::size_t site_distance(const PathLattice& lattice, std::size_t i, std::size_t j) {
  const std::size_t d = i > j ? i - j : j - i;
  if (lattice.boundary == Boundary::Periodic) return std::min(d, lattice.n_sites - d);
  return d;
}

enum class TimeOrder { Forward, Reversed };

Amplitude normalization_for(const PathLattice& lattice, TimeOrder order) {
  const double signed_dt = order == TimeOrder::Forward ? lattice.dt : -lattice.dt;
  return std::sqrt(Amplitude(lattice.mass, 0.0) /
                   (Amplitude(0.0, 2.0 * pi * lattice.hbar * signed_dt)));
}

// Forward: out[to] = sum_from N0 exp(i S(from -> to) / hbar) in[from] dx.
// Reversed: out[b] = sum_a N0(-dt) exp(-i S(b -> a) / hbar) in[a] dx, i.e. the
// segment integral taken with its time limits swapped.
AmplitudeField step_impl(const PathLattice& lattice, const AmplitudeField& field, TimeOrder order) {
  const std::size_t n = lattice.n_sites;
  if (field.size() != n) throw DomainError("field size does not match the lattice");
  const double sign = order == TimeOrder::Forward ? 1.0 : -1.0;
  const Amplitude n0 = normalization_for(lattice, order);

  std::vector<Amplitude> kinetic(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double dist = static_cast<double>(k) * lattice.dx;
    kinetic[k] = std::polar(1.0, sign * 0.5 * lattice.mass * dist * dist / (lattice.dt * lattice.hbar));
  }
  std::vector<Amplitude> potential_phase(n);
  for (std::size_t i = 0; i < n; ++i) {
    potential_phase[i] = std::polar(1.0, -sign * lattice.potential_at(i) * lattice.dt / lattice.hbar);
  }
  const bool magnetic = lattice.has_vector_potential();
  const double coupling = lattice.charge / (lattice.light_speed * lattice.hbar);

  AmplitudeField out{std::vector<Amplitude>(n), field.dx};
  if (order == TimeOrder::Forward) {
    std::vector<Amplitude> weighted(n);
    for (std::size_t i = 0; i < n; ++i) weighted[i] = n0 * potential_phase[i] * field.values[i] * lattice.dx;
    detail::parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t to = begin; to < end; ++to) {
        CompensatedSum acc;
        for (std::size_t from = 0; from < n; ++from) {
          Amplitude term = kinetic[site_distance(lattice, from, to)] * weighted[from];
          if (magnetic) {
            term *= std::polar(1.0, coupling * lattice.vector_potential_at(from) *
                                        lattice.displacement(from, to));
          }
          acc.add(term);
        }
        out.values[to] = acc.value();
      }
    });
  } else {
    detail::parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t b = begin; b < end; ++b) {
        CompensatedSum acc;
        for (std::size_t a = 0; a < n; ++a) {
          Amplitude term = kinetic[site_distance(lattice, a, b)] * field.values[a];
          if (magnetic) {
            term *= std::polar(1.0, -coupling * lattice.vector_potential_at(b) *
                                        lattice.displacement(b, a));
          }
          acc.add(term);
        }
        out.values[b] = n0 * potential_phase[b] * acc.value() * lattice.dx;
      }
    });
  }
  return out;
}

AmplitudeField first_slice(const PathLattice& lattice, std::size_t source, TimeOrder order) {
  AmplitudeField field{std::vector<Amplitude>(lattice.n_sites), lattice.dx};
  if (order == TimeOrder::Forward) {
    for (std::size_t to = 0; to < lattice.n_sites; ++to) field.values[to] = kernel(lattice, source, to);
  } else {
    const Amplitude n0 = normalization_for(lattice, order);
    for (std::size_t b = 0; b < lattice.n_sites; ++b) {
      field.values[b] = n0 * std::polar(1.0, -segment_action(lattice, b, source) / lattice.hbar);
    }
  }
  return field;
}

void renormalize(AmplitudeField& field, std::vector<double>& factors) {
  const double total = field.total_probability();
  if (!(total > 0.0)) throw DomainError("cannot renormalize a field with zero probability");
  const double factor = 1.0 / std::sqrt(total);
  for (auto& v : field.values) v *= factor;
  factors.push_back(factor);
}

}  // namespace

void PathLattice::validate() const {
  if (n_slices < 1) throw DomainError("lattice needs at least one time slice");
  if (n_sites < 2) throw DomainError("lattice needs at least two sites");
  if (!(dx > 0.0) || !(dt > 0.0) || !(mass > 0.0) || !(hbar > 0.0)) {
    throw DomainError("dx, dt, mass and hbar must be positive");
  }
  if (!std::isfinite(dx) || !std::isfinite(dt) || !std::isfinite(mass) || !std::isfinite(hbar)) {
    throw DomainError("lattice parameters must be finite");
  }
  if (!potential.empty() && potential.size() != n_sites) {
    throw DomainError("potential must have one entry per site");
  }
  if (!vector_potential.empty() && vector_potential.size() != n_sites) {
    throw DomainError("vector potential must have one entry per site");
  }
  if (has_vector_potential() && !(light_speed > 0.0)) {
    throw DomainError("light speed must be positive");
  }
}

double PathLattice::displacement(std::size_t from, std::size_t to) const {
  auto d = static_cast<double>(to) - static_cast<double>(from);
  if (boundary == Boundary::Periodic) {
    // Minimum image; a separation of exactly half the ring keeps its direct sign.
    const auto n = static_cast<double>(n_sites);
    if (d > n / 2.0) d -= n;
    if (d < -n / 2.0) d += n;
  }
  return d * dx;
}

double PathLattice::potential_at(std::size_t site) const { return potential.empty() ? 0.0 : potential[site]; }

double PathLattice::vector_potential_at(std::size_t site) const {
  return vector_potential.empty() ? 0.0 : vector_potential[site];
}

bool PathLattice::has_vector_potential() const {
  return std::any_of(vector_potential.begin(), vector_potential.end(), [](double a) { return a != 0.0; });
}

double AmplitudeField::total_probability() const {
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * dx;
}

std::vector<double> AmplitudeField::probability() const {
  std::vector<double> p(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) p[i] = std::norm(values[i]);
  return p;
}

double segment_action(const PathLattice& lattice, std::size_t from, std::size_t to) {
  require_site(lattice, from, "segment start");
  require_site(lattice, to, "segment end");
  const double dx = lattice.displacement(from, to);
  const double v = dx / lattice.dt;
  double lagrangian = 0.5 * lattice.mass * v * v - lattice.potential_at(from);
  const double a = lattice.vector_potential_at(from);
  if (a != 0.0) lagrangian += lattice.charge / lattice.light_speed * a * v;
  return lagrangian * lattice.dt;
}

double action(const Path& path, const PathLattice& lattice) {
  lattice.validate();
  if (path.sites.size() != lattice.n_slices + 1) {
    throw DomainError("path needs n_slices + 1 sites");
  }
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < path.sites.size(); ++k) {
    s += segment_action(lattice, path.sites[k], path.sites[k + 1]);
  }
  return s;
}

Amplitude step_normalization(const PathLattice& lattice) {
  return normalization_for(lattice, TimeOrder::Forward);
}

Amplitude kernel(const PathLattice& lattice, std::size_t from, std::size_t to) {
  return step_normalization(lattice) * std::polar(1.0, segment_action(lattice, from, to) / lattice.hbar);
}

AmplitudeField step(const PathLattice& lattice, const AmplitudeField& field) {
  lattice.validate();
  return step_impl(lattice, field, TimeOrder::Forward);
}

AmplitudeField propagate(const PathLattice& lattice, std::size_t source) {
  lattice.validate();
  require_site(lattice, source, "source");
  AmplitudeField field = first_slice(lattice, source, TimeOrder::Forward);
  for (std::size_t k = 1; k < lattice.n_slices; ++k) field = step_impl(lattice, field, TimeOrder::Forward);
  return field;
}

AmplitudeField propagate_reversed(const PathLattice& lattice, std::size_t sink) {
  lattice.validate();
  require_site(lattice, sink, "sink");
  AmplitudeField field = first_slice(lattice, sink, TimeOrder::Reversed);
  for (std::size_t k = 1; k < lattice.n_slices; ++k) field = step_impl(lattice, field, TimeOrder::Reversed);
  return field;
}

AmplitudeField propagate_gated(const PathLattice& lattice, std::size_t source,
                               std::size_t gate_slice, std::span<const Amplitude> transmission) {
  lattice.validate();
  require_site(lattice, source, "source");
  if (gate_slice < 1 || gate_slice >= lattice.n_slices) {
    throw DomainError("gate slice must be interior (1 <= gate_slice < n_slices)");
  }
  if (transmission.size() != lattice.n_sites) {
    throw DomainError("transmission needs one factor per site");
  }
  AmplitudeField field = first_slice(lattice, source, TimeOrder::Forward);
  for (std::size_t k = 1; k < lattice.n_slices; ++k) {
    if (k == gate_slice) {
      for (std::size_t i = 0; i < field.size(); ++i) field.values[i] *= transmission[i];
    }
    field = step_impl(lattice, field, TimeOrder::Forward);
  }
  return field;
}

AmplitudeField compose_amplitudes(const PathLattice& lattice, std::size_t source,
                                  std::size_t gate_slice, std::span<const std::size_t> open_sites) {
  if (open_sites.empty()) throw DomainError("at least one intermediate site must be open");
  std::vector<Amplitude> transmission(lattice.n_sites, 0.0);
  for (const std::size_t s : open_sites) {
    require_site(lattice, s, "open");
    transmission[s] = 1.0;
  }
  return propagate_gated(lattice, source, gate_slice, transmission);
}

PropagationResult propagate_field(const PathLattice& lattice, const AmplitudeField& initial,
                                  const PropagationOptions& options) {
  lattice.validate();
  if (initial.size() != lattice.n_sites) throw DomainError("initial field size does not match the lattice");
  for (const std::size_t s : options.record_slices) {
    if (s > lattice.n_slices) throw DomainError("recorded slice beyond the final slice");
  }
  auto wanted = [&](std::size_t slice) {
    return slice < lattice.n_slices &&
           std::find(options.record_slices.begin(), options.record_slices.end(), slice) !=
               options.record_slices.end();
  };
  PropagationResult result;
  AmplitudeField field = initial;
  if (wanted(0)) result.slices.emplace_back(0, field);
  for (std::size_t k = 1; k <= lattice.n_slices; ++k) {
    field = step_impl(lattice, field, TimeOrder::Forward);
    if (options.renormalize) {
      renormalize(field, result.renormalization);
    } else {
      result.renormalization.push_back(1.0);
    }
    if (wanted(k)) result.slices.emplace_back(k, field);
  }
  result.slices.emplace_back(lattice.n_slices, std::move(field));
  return result;
}

AmplitudeField make_packet(const PathLattice& lattice, const WavePacket& packet) {
  lattice.validate();
  require_site(lattice, packet.center, "packet center");
  if (!(packet.width > 0.0)) throw DomainError("packet width must be positive");
  AmplitudeField field{std::vector<Amplitude>(lattice.n_sites), lattice.dx};
  const double x0 = lattice.position(packet.center);
  for (std::size_t i = 0; i < lattice.n_sites; ++i) {
    const double x = lattice.position(i);
    const double envelope = std::exp(-(x - x0) * (x - x0) / (4.0 * packet.width * packet.width));
    field.values[i] = std::polar(envelope, packet.momentum * x / lattice.hbar);
  }
  const double total = field.total_probability();
  if (!(total > 0.0)) throw DomainError("packet has no weight on the lattice");
  for (auto& v : field.values) v /= std::sqrt(total);
  return field;
}

double least_action_endpoint(const PathLattice& lattice, const WavePacket& packet) {
  lattice.validate();
  require_site(lattice, packet.center, "packet center");
  const double total_time = static_cast<double>(lattice.n_slices) * lattice.dt;
  double x = lattice.position(packet.center);
  double v = packet.momentum / lattice.mass;
  if (lattice.potential.empty()) return x + v * total_time;

  const double length = static_cast<double>(lattice.n_sites - 1) * lattice.dx;
  auto force = [&](double pos) {
    const double s = std::clamp(pos / lattice.dx, 0.0, static_cast<double>(lattice.n_sites - 1));
    auto i = static_cast<std::size_t>(std::floor(s));
    if (i + 1 >= lattice.n_sites) i = lattice.n_sites - 2;
    return -(lattice.potential[i + 1] - lattice.potential[i]) / lattice.dx;
  };
  constexpr int kSubsteps = 1000;
  const double h = total_time / (static_cast<double>(lattice.n_slices) * kSubsteps);
  double a = force(x) / lattice.mass;
  for (std::size_t k = 0; k < lattice.n_slices * kSubsteps; ++k) {
    x += v * h + 0.5 * a * h * h;
    const double a_next = force(x) / lattice.mass;
    v += 0.5 * (a + a_next) * h;
    a = a_next;
  }
  if (lattice.boundary == Boundary::Periodic) {
    const double period = static_cast<double>(lattice.n_sites) * lattice.dx;
    x = std::fmod(std::fmod(x, period) + period, period);
  } else {
    x = std::clamp(x, 0.0, length);
  }
  return x;
}

SiteRange window_around(const PathLattice& lattice, double x, std::size_t half_width) {
  const double last = static_cast<double>(lattice.n_sites - 1);
  const auto center = static_cast<std::size_t>(std::clamp(std::round(x / lattice.dx), 0.0, last));
  SiteRange r;
  r.first = center > half_width ? center - half_width : 0;
  r.last = std::min(lattice.n_sites - 1, center + half_width);
  return r;
}

std::vector<double> classical_concentration(const PathLattice& lattice, const WavePacket& packet,
                                            SiteRange window,
                                            std::span<const double> hbar_sequence) {
  lattice.validate();
  if (window.first > window.last || window.last >= lattice.n_sites) {
    throw DomainError("window must be a site range inside the lattice");
  }
  for (std::size_t i = 0; i < hbar_sequence.size(); ++i) {
    if (!(hbar_sequence[i] > 0.0)) throw DomainError("hbar values must be positive");
    if (i > 0 && !(hbar_sequence[i] < hbar_sequence[i - 1])) {
      throw DomainError("hbar sequence must be strictly decreasing");
    }
  }
  std::vector<double> fractions;
  for (const double hbar : hbar_sequence) {
    PathLattice scaled = lattice;
    scaled.hbar = hbar;
    const auto result = propagate_field(scaled, make_packet(scaled, packet));
    const auto p = result.final_field().probability();
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      total += p[i];
      if (window.contains(i)) inside += p[i];
    }
    fractions.push_back(inside / total);
  }
  return fractions;
}

double ab_phase(const PathLattice& lattice, double loop_flux) {
  if (!(lattice.hbar > 0.0) || !(lattice.light_speed > 0.0)) {
    throw DomainError("hbar and light speed must be positive");
  }
  const double phase = lattice.charge * loop_flux / (lattice.hbar * lattice.light_speed);
  if (!std::isfinite(phase)) throw DomainError("phase is not finite");
  constexpr double two_pi = 2.0 * pi;
  double r = std::remainder(phase, two_pi);
  if (r < 0.0) r += two_pi;
  // A whole number of flux quanta lands within rounding of 0 or 2 pi.
  const double tol = 1e-12 * std::max(1.0, std::abs(phase));
  if (r <= tol || two_pi - r <= tol) r = 0.0;
  return r;
}

DoubleSlitPattern double_slit(const PathLattice& lattice, std::size_t source,
                              const DoubleSlit& slits, double phase_b) {
  lattice.validate();
  for (const auto* slit : {&slits.slit_a, &slits.slit_b}) {
    if (slit->first > slit->last || slit->last >= lattice.n_sites) {
      throw DomainError("slit must be a site range inside the lattice");
    }
  }
  if (!(slits.slit_a.last < slits.slit_b.first || slits.slit_b.last < slits.slit_a.first)) {
    throw DomainError("slits overlap");
  }
  const Amplitude shift = std::polar(1.0, phase_b);
  std::vector<Amplitude> only_a(lattice.n_sites, 0.0);
  std::vector<Amplitude> only_b(lattice.n_sites, 0.0);
  for (std::size_t i = slits.slit_a.first; i <= slits.slit_a.last; ++i) only_a[i] = 1.0;
  for (std::size_t i = slits.slit_b.first; i <= slits.slit_b.last; ++i) only_b[i] = shift;
  std::vector<Amplitude> both(lattice.n_sites);
  for (std::size_t i = 0; i < both.size(); ++i) both[i] = only_a[i] + only_b[i];
  return {propagate_gated(lattice, source, slits.gate_slice, both),
          propagate_gated(lattice, source, slits.gate_slice, only_a),
          propagate_gated(lattice, source, slits.gate_slice, only_b)};
}

Extrema interior_extrema(std::span<const double> profile) {
  Extrema e;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    if (profile[i] > profile[i - 1] && profile[i] >= profile[i + 1]) e.maxima.push_back(i);
    if (profile[i] < profile[i - 1] && profile[i] <= profile[i + 1]) e.minima.push_back(i);
  }
  return e;
}

}  // namespace qtk::pathint
