#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qtk/entangle.hpp"
#include "qtk/measure.hpp"
#include "qtk/random.hpp"

using qtk::Axis;
using qtk::Bipartition;
using qtk::DomainError;
using qtk::StateVector;

namespace {

constexpr double kPi = std::numbers::pi;
const double kR = 1.0 / std::numbers::sqrt2;

// Two ulps at 1/sqrt(2); renormalization may move the last bit.
constexpr double kUlps = 2.3e-16;

const Bipartition kCut01 = Bipartition::from_side_a(2, {0});

}  // namespace

TEST_CASE("singlet") {
  const auto s = qtk::singlet();
  CHECK(s[0] == 0.0);
  CHECK(std::abs(s[1] - kR) <= kUlps);
  CHECK(std::abs(s[2] + kR) <= kUlps);
  CHECK(s[3] == 0.0);
  CHECK(qtk::schmidt_rank(s, kCut01) == 2);
  const qtk::Observable total_z(qtk::embed_single(qtk::pauli_matrix(qtk::Pauli::Z), 0, 2) +
                                qtk::embed_single(qtk::pauli_matrix(qtk::Pauli::Z), 1, 2));
  CHECK(std::abs(qtk::expectation(s, total_z)) < 1e-15);
}

TEST_CASE("max_entangled") {
  const double one[] = {0.0};
  const auto s1 = qtk::max_entangled(1, one);
  CHECK(std::abs(s1[0] - kR) <= kUlps);
  CHECK(std::abs(s1[1] - kR) <= kUlps);
  const double phases[] = {0.0, 0.0, kPi};
  const auto s2 = qtk::max_entangled(2, phases);
  CHECK(std::abs(s2[0] - 0.5) <= kUlps);
  CHECK(std::abs(s2[1] - 0.5) <= kUlps);
  CHECK(std::abs(s2[2] - 0.5) <= kUlps);
  CHECK(std::abs(s2[3] + 0.5) < 1e-15);

  qtk::Rng rng(200);
  for (std::size_t n = 1; n <= 6; ++n) {
    std::vector<double> ph((std::size_t{1} << n) - 1);
    for (auto& p : ph) p = 2 * kPi * rng.uniform();
    const auto probs = qtk::probabilities(qtk::max_entangled(n, ph));
    const auto [lo, hi] = std::minmax_element(probs.begin(), probs.end());
    CHECK(*hi - *lo < 1e-12);
    CHECK(std::abs(*hi - 1.0 / static_cast<double>(probs.size())) < 1e-12);
  }
  const double too_few[] = {0.0};
  CHECK_THROWS_AS(qtk::max_entangled(2, too_few), DomainError);
}

TEST_CASE("bipartition validation") {
  const auto cut = Bipartition::from_side_a(4, {2, 0});
  CHECK(cut.side_a() == std::vector<std::size_t>{0, 2});
  CHECK(cut.side_b() == std::vector<std::size_t>{1, 3});
  CHECK_THROWS_AS(Bipartition::from_side_a(2, {}), DomainError);
  CHECK_THROWS_AS(Bipartition::from_side_a(2, {0, 1}), DomainError);
  CHECK_THROWS_AS(Bipartition::from_side_a(2, {2}), DomainError);
  CHECK_THROWS_AS(Bipartition::from_side_a(3, {1, 1}), DomainError);
}

TEST_CASE("schmidt rank") {
  CHECK(qtk::schmidt_rank(StateVector::basis(2, {0}), kCut01) == 1);
  const auto bell = StateVector::from_amplitudes({kR, 0.0, 0.0, kR});
  CHECK(qtk::schmidt_rank(bell, kCut01) == 2);
  const auto sv = qtk::schmidt_coefficients(qtk::singlet(), kCut01);
  CHECK(std::abs(sv[0] - kR) < 1e-12);
  CHECK(std::abs(sv[1] - kR) < 1e-12);

  qtk::Rng rng(201);
  for (int k = 0; k < 30; ++k) {
    const auto psi = qtk::haar_state(2, rng);
    oracle::Mat m(2, 2);
    m << psi[0], psi[1], psi[2], psi[3];
    const auto expected = oracle::singular_values_2x2(m);
    const auto got = qtk::schmidt_coefficients(psi, kCut01);
    CHECK(std::abs(got[0] - expected[0]) < 1e-12);
    CHECK(std::abs(got[1] - expected[1]) < 1e-12);
  }
  // Non-contiguous cut: qubit 1 entangled with qubit 2, qubit 0 separate.
  const auto pair = qtk::tensor(StateVector::basis(1, {1}), bell);
  CHECK(qtk::schmidt_rank(pair, Bipartition::from_side_a(3, {0})) == 1);
  CHECK(qtk::schmidt_rank(pair, Bipartition::from_side_a(3, {0, 1})) == 2);
  CHECK(qtk::schmidt_rank(pair, Bipartition::from_side_a(3, {1})) == 2);
}

TEST_CASE("schmidt rank is invariant under local unitaries") {
  qtk::Rng rng(202);
  for (int k = 0; k < 100; ++k) {
    const bool product = k % 2 == 0;
    StateVector psi = product ? qtk::tensor(qtk::haar_state(1, rng), qtk::haar_state(2, rng)) : qtk::haar_state(3, rng);
    const auto cut = Bipartition::from_side_a(3, {0});
    const std::size_t before = qtk::schmidt_rank(psi, cut);
    for (std::size_t q = 0; q < 3; ++q) {
      qtk::apply_single_in_place(psi, qtk::rotation_gate(qtk::random_axis(rng), 2 * kPi * rng.uniform()), q);
    }
    CHECK(qtk::schmidt_rank(psi, cut) == before);
    CHECK(before == (product ? 1U : 2U));
  }
}

TEST_CASE("epr correlation") {
  CHECK(std::abs(qtk::epr_correlation(0.0, 0.0) + 1.0) < 1e-12);
  CHECK(std::abs(qtk::epr_correlation(0.0, kPi) - 1.0) < 1e-12);
  CHECK(std::abs(qtk::epr_correlation(0.0, kPi / 2)) < 1e-12);
  for (int i = 0; i < 17; ++i) {
    const double a = -kPi + 2 * kPi * i / 16.0;
    for (int j = 0; j < 17; ++j) {
      const double b = -kPi + 2 * kPi * j / 16.0;
      const double brute = oracle::epr_expectation(a, b);
      CHECK(std::abs(qtk::epr_correlation(a, b) - brute) < 1e-10);
      CHECK(std::abs(brute + std::cos(a - b)) < 1e-10);
    }
  }
  // The Axis overload reaches the whole sphere: <singlet| a.sigma (x) b.sigma |singlet> = -a.b.
  qtk::Rng rng(203);
  for (int k = 0; k < 20; ++k) {
    const Axis a = qtk::random_axis(rng);
    const Axis b = qtk::random_axis(rng);
    CHECK(std::abs(qtk::epr_correlation(a, b) + (a.nx() * b.nx() + a.ny() * b.ny() + a.nz() * b.nz())) < 1e-10);
  }
}

TEST_CASE("measurement order does not change the joint distribution") {
  qtk::Rng rng(204);
  for (int k = 0; k < 30; ++k) {
    const auto psi = k == 0 ? qtk::singlet() : qtk::haar_state(2, rng);
    const Axis a = qtk::random_axis(rng);
    const Axis b = qtk::random_axis(rng);
    const auto ab = qtk::joint_distribution(psi, a, b, qtk::MeasureOrder::QubitAFirst);
    const auto ba = qtk::joint_distribution(psi, a, b, qtk::MeasureOrder::QubitBFirst);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(ab[i][j] - ba[i][j]) < 1e-12);
  }
}

TEST_CASE("epr sampling") {
  const qtk::Rng rng(42);
  const auto aligned = qtk::epr_sample(0.0, 0.0, 5000, rng);
  CHECK(aligned.n_pp() == 0);
  CHECK(aligned.n_mm() == 0);
  CHECK(aligned.n_pm() + aligned.n_mp() == 5000);

  constexpr std::size_t kShots = 100000;
  const auto ortho = qtk::epr_sample(0.0, kPi / 2, kShots, qtk::Rng(7));
  CHECK(ortho.n_pp() + ortho.n_pm() + ortho.n_mp() + ortho.n_mm() == kShots);
  CHECK(std::abs(ortho.empirical_correlation()) < 5.0 / std::sqrt(static_cast<double>(kShots)));

  const std::vector<double> schedule{0.0, kPi / 4, kPi / 2};
  const auto records = qtk::epr_sample_delayed(schedule, kPi / 3, 3 * kShots, qtk::Rng(8));
  REQUIRE(records.size() == 3);
  for (const auto& r : records) {
    CHECK(r.shots == kShots);
    const double sigma = std::sqrt(0.25 / static_cast<double>(r.shots));
    CHECK(std::abs(r.marginal_b_plus() - 0.5) < 5 * sigma);
    const double e = qtk::epr_correlation(r.angle_a, r.angle_b);
    CHECK(std::abs(r.empirical_correlation() - e) < 5 * std::sqrt((1 - e * e) / static_cast<double>(r.shots)));
  }
  const auto again = qtk::epr_sample(0.3, 1.1, 1000, qtk::Rng(9));
  const auto same = qtk::epr_sample(0.3, 1.1, 1000, qtk::Rng(9));
  CHECK(again.counts == same.counts);
  CHECK_THROWS_AS(qtk::epr_sample(0.0, 0.0, 0, rng), DomainError);
}

TEST_CASE("no-cloning witness") {
  CHECK(qtk::no_cloning_witness(StateVector::basis(1, {0})) < 1e-15);
  CHECK(qtk::no_cloning_witness(StateVector::basis(1, {1})) < 1e-15);
  CHECK(std::abs(qtk::no_cloning_witness(StateVector::from_amplitudes({kR, kR})) - 0.5) < 1e-15);
  qtk::Rng rng(205);
  for (int k = 0; k < 200; ++k) CHECK(qtk::no_cloning_witness(qtk::haar_state(1, rng)) > 1e-6);
  CHECK_THROWS_AS(qtk::no_cloning_witness(StateVector::basis(2, {0})), DomainError);
}
