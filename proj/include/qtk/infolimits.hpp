#pragma once

#include <span>
#include <vector>

namespace qtk::limits {

/// SI constants. The defaults are CODATA 2018 (c, h, k, e exact).
struct PhysicalConstants {
  double G = 6.67430e-11;       // m^3 kg^-1 s^-2
  double c = 299792458.0;       // m s^-1
  double h = 6.62607015e-34;    // J s
  double hbar = 6.62607015e-34 / (2.0 * 3.14159265358979323846);  // J s
  double k = 1.380649e-23;      // J K^-1
  double e = 1.602176634e-19;   // C
};

inline constexpr const char* kConstantsVersion = "CODATA-2018";

const PhysicalConstants& codata2018();

struct FourEvent {
  double ct = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  /// (ct)^2 - x^2 - y^2 - z^2
  double interval() const { return ct * ct - x * x - y * y - z * z; }
};

struct LevelSpec {
  unsigned degeneracy = 1;
  double energy = 0.0;  // J
};

/// log2(w), w >= 1.
double info_bits(double w);

/// n_i / n proportional to g_i exp(-eps_i / kT), normalized.
std::vector<double> boltzmann_occupation(std::span<const LevelSpec> levels, double temperature,
                                         const PhysicalConstants& pc = codata2018());

/// k T ln2 per erased bit.
double landauer_heat(double temperature, double bits, const PhysicalConstants& pc = codata2018());

/// B log2(1 + S/N), bits per second.
double channel_capacity(double bandwidth, double signal_power, double noise_power);

/// 2 G m / c^2
double schwarzschild_radius(double mass, const PhysicalConstants& pc = codata2018());

/// hbar c^3 / (8 pi k G m)
double hawking_temperature(double mass, const PhysicalConstants& pc = codata2018());

/// dm/dt = -hbar c^4 / (3 * 5 * 2^10 pi G^2 m^2), negative.
double evaporation_rate(double mass, const PhysicalConstants& pc = codata2018());

/// Time for the hole to evaporate completely under evaporation_rate: m^3 / (3 K).
double evaporation_time(double mass, const PhysicalConstants& pc = codata2018());

/// sqrt(hbar G / c^3)
double planck_length(const PhysicalConstants& pc = codata2018());

/// S / k = 4 pi R_S^2 / (4 l_P^2)
double bh_entropy_nats(double mass, const PhysicalConstants& pc = codata2018());
/// bh_entropy_nats / ln 2
double bh_entropy_bits(double mass, const PhysicalConstants& pc = codata2018());

/// 3 c^6 / (2^5 pi G^3 m^2), the density at which mass m fits inside R_S.
double collapse_density(double mass, const PhysicalConstants& pc = codata2018());

/// Standard boost along x with velocity v (|v| < c).
FourEvent lorentz_boost(const FourEvent& event, double v, const PhysicalConstants& pc = codata2018());

}  // namespace qtk::limits
