#include "qtk/serialize.hpp"

namespace qtk {

nlohmann::json state_to_json(const StateVector& state) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : state.amplitudes()) amps.push_back({a.real(), a.imag()});
  return {{"n_qubits", state.n_qubits()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("n_qubits") || !doc.contains("amplitudes")) {
    throw DomainError("state dump needs n_qubits and amplitudes");
  }
  const auto n = doc.at("n_qubits").get<std::size_t>();
  std::vector<Amplitude> amps;
  for (const auto& pair : doc.at("amplitudes")) {
    if (!pair.is_array() || pair.size() != 2) throw DomainError("amplitude must be [re, im]");
    amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
  }
  if (n > kMaxQubits || amps.size() != (std::size_t{1} << n)) {
    throw DomainError("amplitude count does not match n_qubits");
  }
  return StateVector::from_amplitudes(std::move(amps));
}

}  // namespace qtk
