#include "qtk/infolimits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qtk/core.hpp"

namespace qtk::limits {
namespace {

using std::numbers::pi;

void require_positive_mass(double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive and finite");
}

}  // namespace

const PhysicalConstants& codata2018() {
  static const PhysicalConstants constants{};
  return constants;
}

double info_bits(double w) {
  if (!(w >= 1.0)) throw DomainError("number of alternatives must be at least 1");
  return std::log2(w);
}

std::vector<double> boltzmann_occupation(std::span<const LevelSpec> levels, double temperature,
                                         const PhysicalConstants& pc) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  if (levels.empty()) return {};
  double e_min = levels.front().energy;
  for (const auto& l : levels) {
    if (l.degeneracy < 1) throw DomainError("degeneracy must be at least 1");
    e_min = std::min(e_min, l.energy);
  }
  // Measuring energies from the lowest level keeps every exponent <= 0.
  const double kt = pc.k * temperature;
  std::vector<double> n(levels.size());
  double total = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    n[i] = levels[i].degeneracy * std::exp(-(levels[i].energy - e_min) / kt);
    total += n[i];
  }
  for (auto& v : n) v /= total;
  return n;
}

double landauer_heat(double temperature, double bits, const PhysicalConstants& pc) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  if (!(bits >= 0.0)) throw DomainError("bit count must be non-negative");
  return pc.k * temperature * std::numbers::ln2 * bits;
}

double channel_capacity(double bandwidth, double signal_power, double noise_power) {
  if (!(noise_power > 0.0)) throw DomainError("noise power must be positive");
  if (!(bandwidth >= 0.0)) throw DomainError("bandwidth must be non-negative");
  if (!(signal_power >= 0.0)) throw DomainError("signal power must be non-negative");
  return bandwidth * std::log2(1.0 + signal_power / noise_power);
}

double schwarzschild_radius(double mass, const PhysicalConstants& pc) {
  require_positive_mass(mass);
  return 2.0 * pc.G * mass / (pc.c * pc.c);
}

double hawking_temperature(double mass, const PhysicalConstants& pc) {
  require_positive_mass(mass);
  return pc.hbar * pc.c * pc.c * pc.c / (8.0 * pi * pc.k * pc.G * mass);
}

double evaporation_rate(double mass, const PhysicalConstants& pc) {
  require_positive_mass(mass);
  const double c4 = std::pow(pc.c, 4);
  return -pc.hbar * c4 / (3.0 * 5.0 * 1024.0 * pi * pc.G * pc.G * mass * mass);
}

double evaporation_time(double mass, const PhysicalConstants& pc) {
  require_positive_mass(mass);
  // dm/dt = -K/m^2  =>  t = m^3 / (3K)
  const double k_rate = -evaporation_rate(mass, pc) * mass * mass;
  return mass * mass * mass / (3.0 * k_rate);
}

double planck_length(const PhysicalConstants& pc) {
  return std::sqrt(pc.hbar * pc.G / (pc.c * pc.c * pc.c));
}

double bh_entropy_nats(double mass, const PhysicalConstants& pc) {
  const double rs = schwarzschild_radius(mass, pc);
  const double lp = planck_length(pc);
  return 4.0 * pi * rs * rs / (4.0 * lp * lp);
}

double bh_entropy_bits(double mass, const PhysicalConstants& pc) {
  return bh_entropy_nats(mass, pc) / std::numbers::ln2;
}

double collapse_density(double mass, const PhysicalConstants& pc) {
  require_positive_mass(mass);
  const double c6 = std::pow(pc.c, 6);
  return 3.0 * c6 / (32.0 * pi * pc.G * pc.G * pc.G * mass * mass);
}

FourEvent lorentz_boost(const FourEvent& event, double v, const PhysicalConstants& pc) {
  if (!std::isfinite(v) || !(std::abs(v) < pc.c)) {
    throw DomainError("boost speed must satisfy |v| < c");
  }
  const double beta = v / pc.c;
  const double gamma = 1.0 / std::sqrt((1.0 - beta) * (1.0 + beta));
  return {gamma * (event.ct - beta * event.x), gamma * (event.x - beta * event.ct), event.y, event.z};
}

}  // namespace qtk::limits
