#include "qtk/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtk/measure.hpp"

namespace qtk {
namespace {

std::size_t sign_slot(double eigenvalue) { return eigenvalue >= 0.0 ? 0 : 1; }

std::vector<std::size_t> register_offsets(const std::vector<std::size_t>& qubits, std::size_t n) {
  const std::size_t m = qubits.size();
  std::vector<std::size_t> off(std::size_t{1} << m, 0);
  for (std::size_t idx = 0; idx < off.size(); ++idx) {
    for (std::size_t k = 0; k < m; ++k) {
      if ((idx >> (m - 1 - k)) & 1U) off[idx] |= std::size_t{1} << (n - 1 - qubits[k]);
    }
  }
  return off;
}

// Outcome tree for "measure qubit 0 along a, then qubit 1 along b" on a fixed state.
struct SequentialTree {
  std::vector<MeasurementOutcome> first;
  std::vector<std::vector<MeasurementOutcome>> second;
};

SequentialTree build_tree(const StateVector& state, const Axis& axis_a, const Axis& axis_b) {
  SequentialTree tree;
  tree.first = qubit_outcome_distribution(state, spin_observable(axis_a), 0);
  for (const auto& o : tree.first) {
    tree.second.push_back(qubit_outcome_distribution(o.post_state, spin_observable(axis_b), 1));
  }
  return tree;
}

std::size_t pick(const std::vector<MeasurementOutcome>& outcomes, double u) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    cumulative += outcomes[i].probability;
    if (u < cumulative) return i;
  }
  return outcomes.size() - 1;
}

}  // namespace

Bipartition Bipartition::from_side_a(std::size_t n_qubits, std::vector<std::size_t> side_a) {
  std::sort(side_a.begin(), side_a.end());
  if (side_a.empty() || side_a.size() >= n_qubits) {
    throw DomainError("bipartition sides must both be non-empty");
  }
  if (std::adjacent_find(side_a.begin(), side_a.end()) != side_a.end()) {
    throw DomainError("bipartition lists a qubit twice");
  }
  if (side_a.back() >= n_qubits) throw DomainError("bipartition qubit out of range");
  Bipartition cut;
  cut.n_qubits_ = n_qubits;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    if (!std::binary_search(side_a.begin(), side_a.end(), q)) cut.side_b_.push_back(q);
  }
  cut.side_a_ = std::move(side_a);
  return cut;
}

StateVector singlet() {
  const double r = 1.0 / std::numbers::sqrt2;
  return StateVector::from_amplitudes({0.0, r, -r, 0.0});
}

StateVector max_entangled(std::size_t n_qubits, std::span<const double> phases) {
  if (n_qubits > kMaxQubits) throw DomainError("register too large");
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (phases.size() != dim - 1) {
    throw DomainError("max_entangled needs " + std::to_string(dim - 1) + " relative phases, got " +
                      std::to_string(phases.size()));
  }
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Amplitude> amps(dim);
  amps[0] = magnitude;
  for (std::size_t i = 1; i < dim; ++i) amps[i] = std::polar(magnitude, phases[i - 1]);
  return StateVector::from_amplitudes(std::move(amps));
}

std::vector<double> schmidt_coefficients(const StateVector& state, const Bipartition& cut) {
  if (cut.n_qubits() != state.n_qubits()) {
    throw DomainError("bipartition does not match the register size");
  }
  const auto rows = register_offsets(cut.side_a(), state.n_qubits());
  const auto cols = register_offsets(cut.side_b(), state.n_qubits());
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = state[rows[i] | cols[j]];
    }
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t schmidt_rank(const StateVector& state, const Bipartition& cut, double tol) {
  const auto s = schmidt_coefficients(state, cut);
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [tol](double v) { return v > tol; }));
}

JointDistribution joint_distribution(const StateVector& two_qubit, const Axis& axis_a,
                                     const Axis& axis_b, MeasureOrder order) {
  if (two_qubit.n_qubits() != 2) throw DomainError("joint_distribution needs a two-qubit state");
  const bool a_first = order == MeasureOrder::QubitAFirst;
  const std::size_t first_qubit = a_first ? 0 : 1;
  const std::size_t second_qubit = a_first ? 1 : 0;
  const Observable first_obs = spin_observable(a_first ? axis_a : axis_b);
  const Observable second_obs = spin_observable(a_first ? axis_b : axis_a);
  JointDistribution dist{};
  for (const auto& o1 : qubit_outcome_distribution(two_qubit, first_obs, first_qubit)) {
    for (const auto& o2 : qubit_outcome_distribution(o1.post_state, second_obs, second_qubit)) {
      const double p = o1.probability * o2.probability;
      const std::size_t s1 = sign_slot(o1.eigenvalue);
      const std::size_t s2 = sign_slot(o2.eigenvalue);
      if (a_first) {
        dist[s1][s2] += p;
      } else {
        dist[s2][s1] += p;
      }
    }
  }
  return dist;
}

double epr_correlation(const Axis& axis_a, const Axis& axis_b) {
  const auto dist = joint_distribution(singlet(), axis_a, axis_b);
  return dist[0][0] - dist[0][1] - dist[1][0] + dist[1][1];
}

double epr_correlation(double angle_a, double angle_b) {
  return epr_correlation(Axis::in_xz_plane(angle_a), Axis::in_xz_plane(angle_b));
}

double EprRecord::empirical_correlation() const {
  if (shots == 0) return 0.0;
  const double same = static_cast<double>(n_pp() + n_mm());
  const double diff = static_cast<double>(n_pm() + n_mp());
  return (same - diff) / static_cast<double>(shots);
}

double EprRecord::marginal_b_plus() const {
  if (shots == 0) return 0.0;
  return static_cast<double>(n_pp() + n_mp()) / static_cast<double>(shots);
}

EprRecord epr_sample(double angle_a, double angle_b, std::size_t shots, const Rng& rng) {
  const double schedule[] = {angle_a};
  return epr_sample_delayed(schedule, angle_b, shots, rng).front();
}

std::vector<EprRecord> epr_sample_delayed(std::span<const double> schedule_a, double angle_b,
                                          std::size_t shots, const Rng& rng) {
  if (shots == 0) throw DomainError("epr_sample needs at least one shot");
  if (schedule_a.empty()) throw DomainError("angle schedule is empty");
  const StateVector prepared = singlet();
  std::vector<SequentialTree> trees;
  std::vector<EprRecord> records;
  for (const double angle_a : schedule_a) {
    trees.push_back(build_tree(prepared, Axis::in_xz_plane(angle_a), Axis::in_xz_plane(angle_b)));
    EprRecord r;
    r.angle_a = angle_a;
    r.angle_b = angle_b;
    records.push_back(r);
  }
  for (std::size_t shot = 0; shot < shots; ++shot) {
    Rng stream = rng.substream(shot);
    // The setting for A is read only after the pair exists.
    const std::size_t choice = shot % schedule_a.size();
    const SequentialTree& tree = trees[choice];
    const std::size_t i = pick(tree.first, stream.uniform());
    const std::size_t j = pick(tree.second[i], stream.uniform());
    EprRecord& rec = records[choice];
    ++rec.shots;
    ++rec.counts[sign_slot(tree.first[i].eigenvalue)][sign_slot(tree.second[i][j].eigenvalue)];
  }
  return records;
}

double no_cloning_witness(const StateVector& qubit) {
  if (qubit.n_qubits() != 1) throw DomainError("no_cloning_witness needs a single-qubit state");
  const StateVector cloned = StateVector::from_amplitudes({qubit[0], 0.0, 0.0, qubit[1]});
  const StateVector ideal = tensor(qubit, qubit);
  return 1.0 - std::norm(inner(ideal, cloned));
}

}  // namespace qtk
