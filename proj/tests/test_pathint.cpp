#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qtk/pathint.hpp"
#include "qtk/rng.hpp"

using qtk::Amplitude;
using qtk::DomainError;
namespace pi = qtk::pathint;

namespace {

constexpr double kPi = std::numbers::pi;

pi::PathLattice small_lattice(std::size_t slices, std::size_t sites) {
  pi::PathLattice l;
  l.n_slices = slices;
  l.n_sites = sites;
  l.dx = 0.7;
  l.dt = 0.9;
  l.mass = 1.3;
  l.hbar = 0.8;
  return l;
}

oracle::Lattice to_oracle(const pi::PathLattice& l) {
  oracle::Lattice o{l.n_slices, l.n_sites, l.dx, l.dt, l.mass, l.hbar, l.potential, l.vector_potential};
  o.charge = l.charge;
  o.light_speed = l.light_speed;
  o.periodic = l.boundary == pi::Boundary::Periodic;
  return o;
}

double max_diff(const pi::AmplitudeField& a, const pi::AmplitudeField& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.values[i] - b.values[i]));
  return d;
}

double max_abs(const pi::AmplitudeField& a) {
  double m = 0.0;
  for (const auto& v : a.values) m = std::max(m, std::abs(v));
  return m;
}

// Two point slits at center -/+ 10 on a 401-site free lattice with a 40-site fringe period.
pi::PathLattice slit_lattice() {
  pi::PathLattice l;
  l.n_slices = 2;
  l.n_sites = 401;
  l.dx = 1.0;
  l.dt = 400.0 / kPi;
  return l;
}

const pi::DoubleSlit kSlits{1, {190, 190}, {210, 210}};

}  // namespace

TEST_CASE("lattice validation") {
  pi::PathLattice l = small_lattice(1, 2);
  CHECK_NOTHROW(l.validate());
  l.n_slices = 0;
  CHECK_THROWS_AS(l.validate(), DomainError);
  l = small_lattice(1, 1);
  CHECK_THROWS_AS(l.validate(), DomainError);
  for (double pi::PathLattice::*field : {&pi::PathLattice::dx, &pi::PathLattice::dt, &pi::PathLattice::mass,
                                         &pi::PathLattice::hbar}) {
    l = small_lattice(1, 3);
    l.*field = 0.0;
    CHECK_THROWS_AS(l.validate(), DomainError);
  }
  l = small_lattice(1, 3);
  l.potential = {1.0, 2.0};
  CHECK_THROWS_AS(l.validate(), DomainError);
}

TEST_CASE("action examples") {
  const auto l = small_lattice(3, 4);
  CHECK(pi::action({{2, 2, 2, 2}}, l) == 0.0);
  auto one = small_lattice(1, 4);
  const double dx = 3 * one.dx;
  CHECK(std::abs(pi::action({{0, 3}}, one) - 0.5 * one.mass * (dx / one.dt) * (dx / one.dt) * one.dt) < 1e-15);
  CHECK_THROWS_AS(pi::action({{0, 1}}, l), DomainError);
  CHECK_THROWS_AS(pi::action({{0, 1, 2, 9}}, l), DomainError);

  // Straight line beats every detour with the same endpoints on a 3x3 lattice.
  const auto grid = small_lattice(2, 3);
  for (std::size_t start = 0; start < 3; ++start) {
    for (std::size_t end = 0; end < 3; ++end) {
      if ((start + end) % 2 != 0) continue;  // midpoint must be a site
      const std::size_t mid = (start + end) / 2;
      const double straight = pi::action({{start, mid, end}}, grid);
      for (std::size_t m = 0; m < 3; ++m) {
        if (m == mid) continue;
        CHECK(pi::action({{start, m, end}}, grid) > straight);
      }
    }
  }
}

TEST_CASE("action includes potential and vector potential terms") {
  auto l = small_lattice(2, 3);
  l.potential = {0.5, -1.0, 2.0};
  l.vector_potential = {0.3, 0.0, -0.2};
  l.charge = 2.0;
  l.light_speed = 4.0;
  const oracle::Lattice o = to_oracle(l);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(pi::action({{a, b, c}}, l) - oracle::path_action(o, {a, b, c})) < 1e-14);
}

TEST_CASE("one slice is the kernel row") {
  const auto l = small_lattice(1, 5);
  const auto field = pi::propagate(l, 2);
  for (std::size_t i = 0; i < 5; ++i) CHECK(field.values[i] == pi::kernel(l, 2, i));
  const Amplitude n0 = pi::step_normalization(l);
  CHECK(std::abs(std::abs(n0) - std::sqrt(l.mass / (2 * kPi * l.hbar * l.dt))) < 1e-15);
  CHECK(std::abs(std::arg(n0) + kPi / 4) < 1e-15);
  CHECK_THROWS_AS(pi::propagate(l, 5), DomainError);
}

TEST_CASE("two slices on three sites sum three intermediate paths") {
  const auto l = small_lattice(2, 3);
  const auto field = pi::propagate(l, 0);
  for (std::size_t end = 0; end < 3; ++end) {
    Amplitude sum = 0.0;
    for (std::size_t mid = 0; mid < 3; ++mid) sum += pi::kernel(l, 0, mid) * pi::kernel(l, mid, end) * l.dx;
    CHECK(std::abs(field.values[end] - sum) < 1e-14);
  }
}

TEST_CASE("transfer matrix equals exhaustive path enumeration") {
  qtk::Rng rng(300);
  double worst = 0.0;
  for (std::size_t sites = 2; sites <= 5; ++sites) {
    for (std::size_t slices = 1; slices <= 5; ++slices) {
      for (int variant = 0; variant < 4; ++variant) {
        auto l = small_lattice(slices, sites);
        if (variant >= 1) {
          l.potential.resize(sites);
          for (auto& v : l.potential) v = 2.0 * rng.uniform() - 1.0;
        }
        if (variant >= 2) {
          l.vector_potential.resize(sites);
          for (auto& a : l.vector_potential) a = 2.0 * rng.uniform() - 1.0;
          l.charge = 1.7;
          l.light_speed = 2.5;
        }
        if (variant == 3) l.boundary = pi::Boundary::Periodic;
        const oracle::Lattice o = to_oracle(l);
        for (std::size_t source = 0; source < sites; ++source) {
          const auto got = pi::propagate(l, source);
          const auto expected = oracle::enumerate_paths(o, source);
          for (std::size_t i = 0; i < sites; ++i) worst = std::max(worst, std::abs(got.values[i] - expected[i]));
        }
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("reversed time order gives the complex conjugate") {
  qtk::Rng rng(301);
  for (int variant = 0; variant < 3; ++variant) {
    auto l = small_lattice(4, 9);
    if (variant >= 1) {
      l.potential.resize(9);
      for (auto& v : l.potential) v = rng.uniform();
    }
    if (variant == 2) {
      l.vector_potential.resize(9);
      for (auto& a : l.vector_potential) a = rng.uniform() - 0.5;
    }
    for (std::size_t a = 0; a < 9; a += 2) {
      const auto forward = pi::propagate(l, a);
      for (std::size_t b = 0; b < 9; b += 3) {
        const auto backward = pi::propagate_reversed(l, b);
        CHECK(std::abs(backward.values[a] - std::conj(forward.values[b])) < 1e-12 * std::max(1.0, max_abs(forward)));
      }
    }
  }
}

TEST_CASE("a fully open intermediate slice changes nothing") {
  auto l = small_lattice(3, 7);
  l.potential = {0.1, 0.2, 0.0, -0.3, 0.4, 0.0, 0.2};
  std::vector<std::size_t> all(7);
  for (std::size_t i = 0; i < 7; ++i) all[i] = i;
  const auto plain = pi::propagate(l, 3);
  for (std::size_t g = 1; g < 3; ++g) CHECK(max_diff(pi::compose_amplitudes(l, 3, g, all), plain) < 1e-12);
  CHECK_THROWS_AS(pi::compose_amplitudes(l, 3, 1, std::span<const std::size_t>{}), DomainError);
  CHECK_THROWS_AS(pi::compose_amplitudes(l, 3, 0, all), DomainError);
  CHECK_THROWS_AS(pi::compose_amplitudes(l, 3, 3, all), DomainError);
}

TEST_CASE("disjoint gates superpose linearly") {
  const auto l = small_lattice(3, 7);
  const std::size_t c1[] = {1};
  const std::size_t c2[] = {4, 5};
  const std::size_t both[] = {1, 4, 5};
  const auto a = pi::compose_amplitudes(l, 2, 1, c1);
  const auto b = pi::compose_amplitudes(l, 2, 1, c2);
  const auto ab = pi::compose_amplitudes(l, 2, 1, both);
  for (std::size_t i = 0; i < 7; ++i) CHECK(std::abs(a.values[i] + b.values[i] - ab.values[i]) < 1e-12);
}

TEST_CASE("double slit: interference at the first null") {
  const auto l = slit_lattice();
  const auto pattern = pi::double_slit(l, 200, kSlits);
  const auto both = pattern.both.probability();
  const auto a = pattern.only_a.probability();
  const auto b = pattern.only_b.probability();
  // First null right of center, found by scanning for the first interior minimum.
  std::size_t null = 201;
  while (null + 1 < both.size() && !(both[null] <= both[null - 1] && both[null] <= both[null + 1])) ++null;
  CHECK(null == 220);
  CHECK(both[200] > a[null] + b[null]);
  CHECK(both[null] < 1e-2 * both[200]);
  for (std::size_t i = 0; i < both.size(); ++i) {
    CHECK(std::abs(pattern.both.values[i] - pattern.only_a.values[i] - pattern.only_b.values[i]) < 1e-15);
  }
  pi::DoubleSlit overlapping{1, {190, 200}, {200, 210}};
  CHECK_THROWS_AS(pi::double_slit(l, 200, overlapping), DomainError);
}

TEST_CASE("aharonov-bohm phase") {
  pi::PathLattice l = slit_lattice();
  l.charge = 0.3;
  l.light_speed = 7.0;
  l.hbar = 1.1;
  CHECK(pi::ab_phase(l, 0.0) == 0.0);
  const double quantum = 2 * kPi * l.hbar * l.light_speed / l.charge;
  CHECK(pi::ab_phase(l, quantum) == 0.0);
  CHECK(pi::ab_phase(l, 3 * quantum) == 0.0);
  CHECK(std::abs(pi::ab_phase(l, quantum / 2) - kPi) < 1e-12);
  CHECK(std::abs(pi::ab_phase(l, -quantum / 4) - 1.5 * kPi) < 1e-12);

  // Phase pi on one branch swaps the maxima and the nulls.
  const auto plain = pi::double_slit(l, 200, kSlits, 0.0).both.probability();
  const auto shifted = pi::double_slit(l, 200, kSlits, pi::ab_phase(l, quantum / 2)).both.probability();
  const auto e0 = pi::interior_extrema(plain);
  const auto e1 = pi::interior_extrema(shifted);
  CHECK(std::find(e0.maxima.begin(), e0.maxima.end(), 200) != e0.maxima.end());
  CHECK(std::find(e1.minima.begin(), e1.minima.end(), 200) != e1.minima.end());
  // A whole flux quantum leaves the pattern unchanged.
  const auto full = pi::double_slit(l, 200, kSlits, pi::ab_phase(l, quantum)).both.probability();
  for (std::size_t i = 0; i < full.size(); ++i) CHECK(full[i] == plain[i]);
}

TEST_CASE("normalized propagation keeps unit probability") {
  pi::PathLattice l;
  l.n_slices = 4;
  l.n_sites = 301;
  l.dx = 0.1;
  l.dt = 0.5;
  l.potential.resize(l.n_sites);
  for (std::size_t i = 0; i < l.n_sites; ++i) l.potential[i] = 0.01 * std::pow(l.position(i) - 15.0, 2);
  const auto packet = pi::make_packet(l, {150, 1.0, 0.5});
  CHECK(std::abs(packet.total_probability() - 1.0) < 1e-12);
  pi::PropagationOptions opts;
  opts.record_slices = {0, 2};
  const auto result = pi::propagate_field(l, packet, opts);
  REQUIRE(result.slices.size() == 3);
  CHECK(result.slices[0].first == 0);
  CHECK(result.slices[1].first == 2);
  CHECK(result.slices[2].first == 4);
  CHECK(result.renormalization.size() == 4);
  for (const auto& [k, field] : result.slices) CHECK(std::abs(field.total_probability() - 1.0) < 1e-8);
  for (double f : result.renormalization) CHECK(f > 0.0);

  opts.renormalize = false;
  const auto raw = pi::propagate_field(l, packet, opts);
  for (double f : raw.renormalization) CHECK(f == 1.0);
  // The logged factors account for the whole drift.
  double product = 1.0;
  for (double f : result.renormalization) product *= f;
  CHECK(max_diff(result.final_field(), [&] {
          auto scaled = raw.final_field();
          for (auto& v : scaled.values) v *= product;
          return scaled;
        }()) < 1e-10);
}

TEST_CASE("parity symmetry of a centered free source") {
  pi::PathLattice l;
  l.n_slices = 3;
  l.n_sites = 201;
  l.dx = 1.0;
  l.dt = 60.0;
  const auto p = pi::propagate(l, 100).probability();
  for (std::size_t k = 1; k <= 100; ++k) CHECK(std::abs(p[100 + k] - p[100 - k]) <= 1e-10 * p[100]);
}

TEST_CASE("classical concentration") {
  pi::PathLattice l;
  l.n_slices = 2;
  l.n_sites = 401;
  l.dx = 0.05;
  l.dt = 2.0;
  const pi::WavePacket packet{200, 1.0, 0.0};
  const double hbars[] = {1.0, 0.25, 0.0625};
  const auto whole = pi::classical_concentration(l, packet, {0, 400}, hbars);
  for (double f : whole) CHECK(std::abs(f - 1.0) < 1e-12);

  // Mirror-image windows around the center carry equal mass.
  const auto left = pi::classical_concentration(l, packet, {150, 180}, hbars);
  const auto right = pi::classical_concentration(l, packet, {220, 250}, hbars);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(left[i] - right[i]) < 1e-10);

  const double increasing[] = {0.25, 1.0};
  CHECK_THROWS_AS(pi::classical_concentration(l, packet, {0, 10}, increasing), DomainError);
  const double negative[] = {-1.0};
  CHECK_THROWS_AS(pi::classical_concentration(l, packet, {0, 10}, negative), DomainError);
  CHECK_THROWS_AS(pi::classical_concentration(l, packet, {10, 500}, hbars), DomainError);
}

TEST_CASE("least-action endpoint and window") {
  pi::PathLattice l;
  l.n_slices = 2;
  l.n_sites = 4001;
  l.dx = 0.01;
  l.dt = 18.0;
  const pi::WavePacket packet{1800, 2.0, 0.2};
  const double x = pi::least_action_endpoint(l, packet);
  CHECK(std::abs(x - (18.0 + 0.2 * 36.0)) < 1e-12);
  const auto w = pi::window_around(l, x, 3);
  CHECK(w.first == 2517);
  CHECK(w.last == 2523);

  // Uniform force from a linear potential: x(T) = x0 + v T + F T^2 / (2 m).
  l.potential.resize(l.n_sites);
  const double force = -0.001;
  for (std::size_t i = 0; i < l.n_sites; ++i) l.potential[i] = -force * l.position(i);
  const double expected = 18.0 + 0.2 * 36.0 + 0.5 * force * 36.0 * 36.0;
  CHECK(std::abs(pi::least_action_endpoint(l, packet) - expected) < 1e-9);

  const auto edge = pi::window_around(l, 0.0, 5);
  CHECK(edge.first == 0);
  CHECK(edge.last == 5);
}

TEST_CASE("interior extrema") {
  const std::vector<double> profile{3, 1, 2, 5, 4, 4, 6, 0};
  const auto e = pi::interior_extrema(profile);
  CHECK(e.maxima == std::vector<std::size_t>{3, 6});
  CHECK(e.minima == std::vector<std::size_t>{1, 4});
}
