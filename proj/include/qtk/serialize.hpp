#pragma once

#include <json.hpp>

#include "qtk/statevec.hpp"

namespace qtk {

/// State dump: {"n_qubits": n, "amplitudes": [[re, im], ...]} in ascending index order.
nlohmann::json state_to_json(const StateVector& state);
StateVector state_from_json(const nlohmann::json& doc);

}  // namespace qtk
