#include "qtk/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qtk/measure.hpp"
#include "qtk/rng.hpp"

namespace qtk {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

// Recursive descent over: expr = term {(+|-) term}; term = unary {(*|/) unary};
// unary = (+|-) unary | primary; primary = number [pi] | pi | ( expr ).
class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  bool parse(double& out) {
    if (!expr(out)) return false;
    skip_space();
    return pos_ == text_.size() && std::isfinite(out);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_pi() {
    skip_space();
    if (text_.size() - pos_ >= 2 && std::tolower(static_cast<unsigned char>(text_[pos_])) == 'p' &&
        std::tolower(static_cast<unsigned char>(text_[pos_ + 1])) == 'i') {
      pos_ += 2;
      return true;
    }
    return false;
  }
  bool expr(double& out) {
    if (!term(out)) return false;
    for (;;) {
      double rhs = 0.0;
      if (accept('+')) {
        if (!term(rhs)) return false;
        out += rhs;
      } else if (accept('-')) {
        if (!term(rhs)) return false;
        out -= rhs;
      } else {
        return true;
      }
    }
  }
  bool term(double& out) {
    if (!unary(out)) return false;
    for (;;) {
      double rhs = 0.0;
      if (accept('*')) {
        if (!unary(rhs)) return false;
        out *= rhs;
      } else if (accept('/')) {
        if (!unary(rhs)) return false;
        out /= rhs;
      } else {
        return true;
      }
    }
  }
  bool unary(double& out) {
    if (accept('-')) {
      if (!unary(out)) return false;
      out = -out;
      return true;
    }
    if (accept('+')) return unary(out);
    return primary(out);
  }
  bool primary(double& out) {
    if (accept('(')) return expr(out) && accept(')');
    if (accept_pi()) {
      out = std::numbers::pi;
      return true;
    }
    skip_space();
    const char* begin = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), out);
    if (ec != std::errc{} || ptr == begin) return false;
    pos_ += static_cast<std::size_t>(ptr - begin);
    if (accept_pi()) out *= std::numbers::pi;
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double parse_param(std::string_view token, std::size_t line) {
  double v = 0.0;
  if (!ExpressionParser(token).parse(v)) {
    throw ParseError(line, "invalid parameter '" + std::string(token) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

// Index of the ')' closing the '(' at s[0], or npos.
std::size_t matching_paren(std::string_view s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i;
  }
  return std::string_view::npos;
}

std::size_t parse_qubit(std::string_view token, std::size_t n_qubits, std::size_t line) {
  std::size_t q = 0;
  if (!parse_int(token, q)) throw ParseError(line, "invalid qubit index '" + std::string(token) + "'");
  if (q >= n_qubits) {
    throw ParseError(line, "qubit " + std::to_string(q) + " out of range for " +
                               std::to_string(n_qubits) + " qubits");
  }
  return q;
}

Instruction parse_instruction(std::string_view body, std::size_t n_qubits, std::size_t line) {
  std::size_t name_end = 0;
  while (name_end < body.size() && !std::isspace(static_cast<unsigned char>(body[name_end])) &&
         body[name_end] != '(') {
    ++name_end;
  }
  Instruction ins;
  ins.line = line;
  ins.gate = upper(body.substr(0, name_end));
  const GateSpec* spec = find_gate(ins.gate);
  if (spec == nullptr) throw ParseError(line, "unknown gate '" + std::string(body.substr(0, name_end)) + "'");

  std::string_view rest = trim(body.substr(name_end));
  std::vector<std::string_view> operand_tokens;
  std::vector<std::string_view> param_tokens;
  if (!rest.empty() && rest.front() == '(') {
    const std::size_t close = matching_paren(rest);
    if (close == rest.npos) throw ParseError(line, "unbalanced parentheses");
    const std::string_view inside = trim(rest.substr(1, close - 1));
    if (!inside.empty()) param_tokens = split_commas(inside);
    operand_tokens = split_ws(rest.substr(close + 1));
  } else {
    const auto tokens = split_ws(rest);
    const std::size_t n_ops = std::min(tokens.size(), spec->operands);
    operand_tokens.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n_ops));
    param_tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(n_ops), tokens.end());
  }
  if (operand_tokens.size() != spec->operands || param_tokens.size() != spec->params) {
    throw ParseError(line, ins.gate + " takes " + std::to_string(spec->operands) + " qubit(s) and " +
                               std::to_string(spec->params) + " parameter(s), got " +
                               std::to_string(operand_tokens.size()) + " and " +
                               std::to_string(param_tokens.size()));
  }
  for (const auto tok : operand_tokens) ins.operands.push_back(parse_qubit(tok, n_qubits, line));
  for (const auto tok : param_tokens) ins.params.push_back(parse_param(tok, line));
  if (ins.operands.size() == 2 && ins.operands[0] == ins.operands[1]) {
    throw ParseError(line, "control and target must differ");
  }
  try {
    (void)instruction_gate(ins);
  } catch (const DomainError& e) {
    throw ParseError(line, e.what());
  }
  return ins;
}

MeasureDirective parse_measure(const std::vector<std::string_view>& tokens, std::size_t n_qubits,
                               std::size_t line) {
  MeasureDirective m;
  if (tokens.size() < 3) throw ParseError(line, "MEASURE needs a basis and targets");
  const std::string basis = upper(tokens[1]);
  if (basis == "X") {
    m.basis = MeasureBasis::X;
  } else if (basis == "Y") {
    m.basis = MeasureBasis::Y;
  } else if (basis == "Z") {
    m.basis = MeasureBasis::Z;
  } else {
    throw ParseError(line, "unknown measurement basis '" + std::string(tokens[1]) + "'");
  }
  std::size_t i = 2;
  if (upper(tokens[i]) == "ALL") {
    m.all = true;
    ++i;
  } else {
    m.all = false;
    for (; i < tokens.size() && tokens[i].find('=') == std::string_view::npos; ++i) {
      const std::size_t q = parse_qubit(tokens[i], n_qubits, line);
      if (std::find(m.targets.begin(), m.targets.end(), q) != m.targets.end()) {
        throw ParseError(line, "qubit " + std::to_string(q) + " measured twice");
      }
      m.targets.push_back(q);
    }
    if (m.targets.empty()) throw ParseError(line, "MEASURE needs 'all' or qubit indices");
  }
  for (; i < tokens.size(); ++i) {
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "unexpected token '" + std::string(tokens[i]) + "'");
    const std::string key = upper(tokens[i].substr(0, eq));
    const std::string_view value = tokens[i].substr(eq + 1);
    if (key == "SHOTS") {
      if (!parse_int(value, m.shots) || m.shots == 0) throw ParseError(line, "SHOTS must be a positive integer");
    } else if (key == "SEED") {
      if (!parse_int(value, m.seed)) throw ParseError(line, "SEED must be a non-negative integer");
    } else {
      throw ParseError(line, "unknown MEASURE option '" + key + "'");
    }
  }
  return m;
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Observable basis_observable(MeasureBasis basis) {
  switch (basis) {
    case MeasureBasis::X:
      return pauli_observable(Pauli::X);
    case MeasureBasis::Y:
      return pauli_observable(Pauli::Y);
    case MeasureBasis::Z:
      break;
  }
  return pauli_observable(Pauli::Z);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : DomainError("line " + std::to_string(line) + ": " + message), line_(line), message_(message) {}

const std::vector<GateSpec>& gate_registry() {
  static const std::vector<GateSpec> registry = {
      {"I", 1, 0},  {"X", 1, 0},  {"Y", 1, 0},  {"Z", 1, 0}, {"H", 1, 0},    {"RX", 1, 1},
      {"RY", 1, 1}, {"RZ", 1, 1}, {"R", 1, 4},  {"CNOT", 2, 0}, {"CU", 2, 4},
  };
  return registry;
}

const GateSpec* find_gate(std::string_view name) {
  for (const auto& g : gate_registry()) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

std::vector<std::size_t> CircuitProgram::measured_qubits() const {
  if (!measure) return {};
  if (!measure->all) return measure->targets;
  std::vector<std::size_t> all(n_qubits);
  for (std::size_t q = 0; q < n_qubits; ++q) all[q] = q;
  return all;
}

CircuitProgram parse_circuit(std::string_view text) {
  CircuitProgram program;
  bool have_qubits = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
    pos = nl == text.npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != raw.npos) raw = raw.substr(0, hash);
    const std::string_view body = trim(raw);
    if (body.empty()) continue;

    const auto tokens = split_ws(body);
    const std::string keyword = upper(tokens.front());
    if (program.measure) throw ParseError(line_no, "nothing may follow MEASURE");
    if (keyword == "QUBITS") {
      if (have_qubits) throw ParseError(line_no, "QUBITS declared twice");
      if (tokens.size() != 2 || !parse_int(tokens[1], program.n_qubits) || program.n_qubits == 0) {
        throw ParseError(line_no, "QUBITS needs one positive integer");
      }
      if (program.n_qubits > kMaxQubits) {
        throw ParseError(line_no, "at most " + std::to_string(kMaxQubits) + " qubits are supported");
      }
      have_qubits = true;
      continue;
    }
    if (!have_qubits) throw ParseError(line_no, "QUBITS must come first");
    if (keyword == "MEASURE") {
      program.measure = parse_measure(tokens, program.n_qubits, line_no);
      continue;
    }
    program.instructions.push_back(parse_instruction(body, program.n_qubits, line_no));
  }
  if (!have_qubits) throw ParseError(line_no, "missing QUBITS declaration");
  return program;
}

std::string serialize_circuit(const CircuitProgram& program) {
  std::ostringstream out;
  out << "QUBITS " << program.n_qubits << '\n';
  for (const auto& ins : program.instructions) {
    out << ins.gate;
    for (const auto q : ins.operands) out << ' ' << q;
    for (const double p : ins.params) out << ' ' << format_param(p);
    out << '\n';
  }
  if (program.measure) {
    const auto& m = *program.measure;
    out << "MEASURE " << (m.basis == MeasureBasis::X ? "X" : m.basis == MeasureBasis::Y ? "Y" : "Z");
    if (m.all) {
      out << " all";
    } else {
      for (const auto q : m.targets) out << ' ' << q;
    }
    out << " SHOTS=" << m.shots << " SEED=" << m.seed << '\n';
  }
  return out.str();
}

Unitary instruction_gate(const Instruction& ins) {
  const std::string& g = ins.gate;
  const auto& p = ins.params;
  if (g == "I") return Unitary::identity(2);
  if (g == "X" || g == "CNOT") return pauli(Pauli::X);
  if (g == "Y") return pauli(Pauli::Y);
  if (g == "Z") return pauli(Pauli::Z);
  if (g == "H") return rotation_gate(Axis::normalized(1.0, 0.0, 1.0), std::numbers::pi);
  if (g == "RX") return rotation_gate(Axis::x(), p.at(0));
  if (g == "RY") return rotation_gate(Axis::y(), p.at(0));
  if (g == "RZ") return rotation_gate(Axis::z(), p.at(0));
  if (g == "R" || g == "CU") return rotation_gate(Axis::normalized(p.at(0), p.at(1), p.at(2)), p.at(3));
  throw DomainError("unknown gate '" + g + "'");
}

void apply_instruction(StateVector& state, const Instruction& ins) {
  const Unitary gate = instruction_gate(ins);
  if (ins.operands.size() == 2) {
    apply_controlled_in_place(state, gate, ins.operands[0], ins.operands[1]);
  } else {
    apply_single_in_place(state, gate, ins.operands.at(0));
  }
}

StateVector evaluate_circuit(const CircuitProgram& program) {
  StateVector state = StateVector::basis(program.n_qubits, {0});
  for (const auto& ins : program.instructions) apply_instruction(state, ins);
  return state;
}

std::vector<ShotRecord> sample_shots(const CircuitProgram& program, const StateVector& final_state) {
  if (!program.measure) throw DomainError("program has no MEASURE directive");
  if (final_state.n_qubits() != program.n_qubits) throw DomainError("state does not match the program");
  const auto& m = *program.measure;
  const Observable obs = basis_observable(m.basis);
  const auto targets = program.measured_qubits();
  const Rng root(m.seed);
  std::vector<ShotRecord> records;
  records.reserve(m.shots);
  for (std::size_t shot = 0; shot < m.shots; ++shot) {
    Rng rng = root.substream(shot);
    StateVector state = final_state;
    ShotRecord rec;
    rec.shot_index = shot;
    for (const auto q : targets) {
      MeasurementOutcome o = measure_qubit(state, obs, q, rng);
      const bool minus = o.eigenvalue < 0.0;
      rec.eigenvalue *= minus ? -1 : 1;
      rec.basis_string.push_back(minus ? '1' : '0');
      state = std::move(o.post_state);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace qtk
