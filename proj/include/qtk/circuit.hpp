#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtk/gates.hpp"
#include "qtk/statevec.hpp"

namespace qtk {

/// Circuit-file syntax error. what() reads "line N: ...".
class ParseError : public DomainError {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

struct GateSpec {
  std::string_view name;
  std::size_t operands;
  std::size_t params;
};

/// I X Y Z H (1 qubit), RX RY RZ (1 qubit, angle), R (1 qubit; nx ny nz angle),
/// CNOT (control target), CU (control target; nx ny nz angle).
const std::vector<GateSpec>& gate_registry();
const GateSpec* find_gate(std::string_view name);

struct Instruction {
  std::string gate;
  std::vector<std::size_t> operands;
  std::vector<double> params;
  /// Source line, 0 when built programmatically. Not part of equality.
  std::size_t line = 0;

  bool operator==(const Instruction& other) const {
    return gate == other.gate && operands == other.operands && params == other.params;
  }
};

enum class MeasureBasis { X, Y, Z };

/// Each target qubit is measured along the basis Pauli, in target order. A
/// shot's eigenvalue is the product of the per-qubit +-1 results.
struct MeasureDirective {
  MeasureBasis basis = MeasureBasis::Z;
  bool all = true;
  /// Explicit targets when `all` is false.
  std::vector<std::size_t> targets;
  std::size_t shots = 1;
  std::uint64_t seed = 0;

  bool operator==(const MeasureDirective&) const = default;
};

struct CircuitProgram {
  std::size_t n_qubits = 0;
  std::vector<Instruction> instructions;
  std::optional<MeasureDirective> measure;

  bool operator==(const CircuitProgram&) const = default;
  std::vector<std::size_t> measured_qubits() const;
};

/// Line grammar:
///   QUBITS n                      (once, before any gate)
///   GATE q... [p...]  or  GATE(p, ...) q...
///   MEASURE X|Y|Z all|q... [SHOTS=k] [SEED=s]   (last statement)
/// '#' starts a comment. Parameters accept numbers and `pi` combined with
/// + - * / and parentheses.
CircuitProgram parse_circuit(std::string_view text);

/// Canonical text form; parameters printed with 17 significant digits so
/// parse_circuit(serialize_circuit(p)) == p.
std::string serialize_circuit(const CircuitProgram& program);

/// The 2x2 unitary an instruction applies (for CNOT/CU, the gate on the target).
Unitary instruction_gate(const Instruction& instruction);

void apply_instruction(StateVector& state, const Instruction& instruction);

/// Runs every instruction on |0...0>.
StateVector evaluate_circuit(const CircuitProgram& program);

struct ShotRecord {
  std::size_t shot_index = 0;
  int eigenvalue = 1;
  /// One character per measured qubit: '0' for +1, '1' for -1.
  std::string basis_string;
};

/// Samples the program's MEASURE directive on `final_state`. Shot k uses
/// Rng(seed).substream(k), so any shot can be reproduced alone.
std::vector<ShotRecord> sample_shots(const CircuitProgram& program, const StateVector& final_state);

}  // namespace qtk
