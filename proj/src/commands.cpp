#include "qtk/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "qtk/circuit.hpp"
#include "qtk/entangle.hpp"
#include "qtk/experiment.hpp"
#include "qtk/infolimits.hpp"
#include "qtk/pathint.hpp"

namespace qtk::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kAmplitudeDigits = 17;
constexpr int kDerivedDigits = 12;

std::string amp(double v) { return format_real(v, kAmplitudeDigits); }
std::string real(double v) { return format_real(v, kDerivedDigits); }

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string seed_line(std::optional<std::uint64_t> seed) {
  return "# seed=" + (seed ? std::to_string(*seed) : std::string("none")) + "\n";
}

// Collects artifacts for one run and writes them next to a manifest.
class RunOutputs {
 public:
  RunOutputs(std::string command, fs::path dir) : command_(std::move(command)), dir_(std::move(dir)) {}

  void write(const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw DomainError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    const fs::path path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    f.close();
    if (!f) throw DomainError("cannot write '" + path.string() + "'");
    files_.push_back(name);
  }

  // Output names are relative to the output directory, so the manifest does
  // not depend on where the run was directed.
  void finish(const std::string& input_bytes, std::optional<std::uint64_t> seed, json parameters,
              json extra = json::object()) {
    json m;
    m["command"] = command_;
    m["parameters"] = std::move(parameters);
    m["input_hash"] = hash_hex(fnv1a64(input_bytes));
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["constants_version"] = limits::kConstantsVersion;
    m["outputs"] = files_;
    for (auto& [k, v] : extra.items()) m[k] = v;
    const std::string name = command_ + "_manifest.json";
    files_.push_back(name);
    write(name, m.dump(2) + "\n");
    files_.pop_back();
  }

 private:
  std::string command_;
  fs::path dir_;
  std::vector<std::string> files_;
};

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

struct CircuitArgs {
  std::string file;
  std::optional<std::size_t> shots;
  std::optional<std::uint64_t> seed;
};

int run_circuit(const CircuitArgs& a, const fs::path& dir, std::ostream& out) {
  const std::string text = read_file(a.file);
  CircuitProgram program = parse_circuit(text);
  if ((a.shots || a.seed) && !program.measure) program.measure = MeasureDirective{};
  if (a.shots) {
    if (*a.shots == 0) throw DomainError("--shots must be positive");
    program.measure->shots = *a.shots;
  }
  if (a.seed) program.measure->seed = *a.seed;

  const StateVector state = evaluate_circuit(program);
  const std::optional<std::uint64_t> seed =
      program.measure ? std::optional<std::uint64_t>(program.measure->seed) : std::nullopt;
  RunOutputs outputs("circuit", dir);

  std::ostringstream state_csv;
  state_csv << seed_line(seed) << "index,basis,re,im,probability\n";
  for (std::size_t i = 0; i < state.dim(); ++i) {
    state_csv << i << ',' << basis_label({i}, state.n_qubits()) << ',' << amp(state[i].real()) << ','
              << amp(state[i].imag()) << ',' << real(std::norm(state[i])) << '\n';
  }
  outputs.write("circuit_state.csv", state_csv.str());

  if (program.measure) {
    const auto shots = sample_shots(program, state);
    std::ostringstream csv;
    csv << seed_line(seed) << "shot_index,eigenvalue,basis_string\n";
    std::map<std::string, std::size_t> histogram;
    for (const auto& s : shots) {
      csv << s.shot_index << ',' << s.eigenvalue << ',' << s.basis_string << '\n';
      ++histogram[s.basis_string];
    }
    outputs.write("circuit_shots.csv", csv.str());
    out << "outcome counts over " << shots.size() << " shots (seed " << *seed << "):\n";
    for (const auto& [bits, count] : histogram) out << "  " << bits << "  " << count << '\n';
  }
  out << "state written for " << program.n_qubits << " qubit(s), " << program.instructions.size()
      << " instruction(s)\n";
  json params = {{"file", fs::path(a.file).filename().string()}};
  if (program.measure) params["shots"] = program.measure->shots;
  outputs.finish(text, seed, params);
  return kExitOk;
}

struct EprArgs {
  std::vector<double> angle_a;
  double angle_b = 0.0;
  std::size_t shots = 1000;
  std::uint64_t seed = 0;
};

int run_epr(const EprArgs& a, const fs::path& dir, std::ostream& out) {
  const auto records = epr_sample_delayed(a.angle_a, a.angle_b, a.shots, Rng(a.seed));
  std::ostringstream csv;
  csv << seed_line(a.seed)
      << "angle_a,angle_b,shots,n_pp,n_pm,n_mp,n_mm,empirical_correlation,analytic_correlation,"
         "marginal_b_plus\n";
  for (const auto& r : records) {
    csv << amp(r.angle_a) << ',' << amp(r.angle_b) << ',' << r.shots << ',' << r.n_pp() << ','
        << r.n_pm() << ',' << r.n_mp() << ',' << r.n_mm() << ',' << real(r.empirical_correlation())
        << ',' << real(epr_correlation(r.angle_a, r.angle_b)) << ',' << real(r.marginal_b_plus())
        << '\n';
    out << "a=" << real(r.angle_a) << " b=" << real(r.angle_b) << "  E=" << real(r.empirical_correlation())
        << " (analytic " << real(epr_correlation(r.angle_a, r.angle_b)) << ", " << r.shots << " shots)\n";
  }
  RunOutputs outputs("epr", dir);
  outputs.write("epr.csv", csv.str());
  const json params = {{"angle_a", a.angle_a}, {"angle_b", a.angle_b}, {"shots", a.shots}};
  outputs.finish(params.dump(), a.seed, params);
  return kExitOk;
}

Experiment load_experiment(const std::string& path, std::string& bytes) {
  bytes = read_file(path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    throw DomainError("'" + path + "' is not valid JSON: " + e.what());
  }
  try {
    return experiment_from_json(doc);
  } catch (const json::exception& e) {
    throw DomainError("'" + path + "': " + e.what());
  }
}

struct DoubleSlitArgs {
  std::string config;
  std::optional<double> flux;
  std::optional<double> phase;
};

int run_doubleslit(const DoubleSlitArgs& a, const fs::path& dir, std::ostream& out) {
  std::string bytes;
  Experiment ex = load_experiment(a.config, bytes);
  if (!ex.source) throw DomainError("double-slit descriptor needs \"source\"");
  if (!ex.slits) throw DomainError("double-slit descriptor needs \"slits\"");
  if (a.flux) {
    ex.flux = *a.flux;
    ex.phase.reset();
  }
  if (a.phase) ex.phase = *a.phase;
  const double phase = ex.slit_phase();
  const auto pattern = pathint::double_slit(ex.lattice, *ex.source, *ex.slits, phase);
  const auto both = pattern.both.probability();
  const auto only_a = pattern.only_a.probability();
  const auto only_b = pattern.only_b.probability();

  std::ostringstream csv;
  csv << seed_line(std::nullopt) << "site,position,re,im,intensity,intensity_a,intensity_b\n";
  double peak = 0.0;
  double interior_min = both.size() > 2 ? both[1] : 0.0;
  for (std::size_t i = 0; i < both.size(); ++i) {
    const Amplitude v = pattern.both.values[i];
    csv << i << ',' << amp(ex.lattice.position(i)) << ',' << amp(v.real()) << ',' << amp(v.imag()) << ','
        << real(both[i]) << ',' << real(only_a[i]) << ',' << real(only_b[i]) << '\n';
    peak = std::max(peak, both[i]);
    if (i > 0 && i + 1 < both.size()) interior_min = std::min(interior_min, both[i]);
  }
  RunOutputs outputs("doubleslit", dir);
  outputs.write("doubleslit.csv", csv.str());
  const auto extrema = pathint::interior_extrema(both);
  out << "slit-b phase " << real(phase) << " rad\n"
      << "peak intensity " << real(peak) << ", interior minimum " << real(interior_min) << " (ratio "
      << real(peak > 0.0 ? interior_min / peak : 0.0) << ")\n"
      << extrema.maxima.size() << " interior maxima, " << extrema.minima.size() << " interior minima\n";
  outputs.finish(bytes, std::nullopt, {{"config", fs::path(a.config).filename().string()}, {"phase", phase}});
  return kExitOk;
}

int run_propagator(const std::string& config, const fs::path& dir, std::ostream& out) {
  std::string bytes;
  const Experiment ex = load_experiment(config, bytes);
  std::vector<std::pair<std::size_t, pathint::AmplitudeField>> slices;
  std::vector<double> factors;
  if (ex.packet) {
    pathint::PropagationOptions opts;
    opts.renormalize = ex.renormalize;
    opts.record_slices = ex.record_slices;
    auto result = pathint::propagate_field(ex.lattice, pathint::make_packet(ex.lattice, *ex.packet), opts);
    slices = std::move(result.slices);
    factors = std::move(result.renormalization);
  } else if (ex.source) {
    slices.emplace_back(ex.lattice.n_slices, pathint::propagate(ex.lattice, *ex.source));
  } else {
    throw DomainError("propagator descriptor needs \"packet\" or \"source\"");
  }
  std::ostringstream csv;
  csv << seed_line(std::nullopt) << "slice,site,re,im,probability\n";
  for (const auto& [k, field] : slices) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      const Amplitude v = field.values[i];
      csv << k << ',' << i << ',' << amp(v.real()) << ',' << amp(v.imag()) << ',' << real(std::norm(v)) << '\n';
    }
  }
  RunOutputs outputs("propagator", dir);
  outputs.write("propagator.csv", csv.str());
  const auto& final_field = slices.back().second;
  out << "propagated " << ex.lattice.n_slices << " slice(s) over " << ex.lattice.n_sites
      << " sites; final total probability " << real(final_field.total_probability()) << '\n';
  json extra = json::object();
  extra["renormalization"] = factors;
  outputs.finish(bytes, std::nullopt, {{"config", fs::path(config).filename().string()}}, extra);
  return kExitOk;
}

struct LimitsArgs {
  std::optional<double> mass;
  std::optional<double> temperature;
  std::optional<double> bandwidth;
  std::optional<double> snr;
  bool as_json = false;
};

struct Row {
  std::string quantity;
  double value;
  std::string unit;
};

int run_limits(const LimitsArgs& a, const fs::path& dir, std::ostream& out) {
  using namespace limits;
  constexpr double kSecondsPerYear = 365.25 * 86400.0;
  std::vector<Row> rows;
  json params = json::object();
  rows.push_back({"planck_length", planck_length(), "m"});
  if (a.mass) {
    const double m = *a.mass;
    params["mass"] = m;
    rows.push_back({"schwarzschild_radius", schwarzschild_radius(m), "m"});
    rows.push_back({"hawking_temperature", hawking_temperature(m), "K"});
    rows.push_back({"evaporation_rate", evaporation_rate(m), "kg/s"});
    rows.push_back({"evaporation_time", evaporation_time(m), "s"});
    rows.push_back({"evaporation_time_years", evaporation_time(m) / kSecondsPerYear, "yr"});
    rows.push_back({"bekenstein_entropy", bh_entropy_nats(m), "k"});
    rows.push_back({"bekenstein_entropy_bits", bh_entropy_bits(m), "bit"});
    rows.push_back({"collapse_density", collapse_density(m), "kg/m^3"});
  }
  if (a.temperature) {
    params["temperature"] = *a.temperature;
    rows.push_back({"landauer_heat_per_bit", landauer_heat(*a.temperature, 1.0), "J"});
  }
  if (a.bandwidth || a.snr) {
    if (!a.bandwidth || !a.snr) throw DomainError("--bandwidth and --snr go together");
    params["bandwidth"] = *a.bandwidth;
    params["snr"] = *a.snr;
    rows.push_back({"channel_capacity", channel_capacity(*a.bandwidth, *a.snr, 1.0), "bit/s"});
  }

  std::string table;
  std::string name;
  if (a.as_json) {
    json doc;
    doc["constants_version"] = kConstantsVersion;
    doc["inputs"] = params;
    doc["results"] = json::array();
    for (const auto& r : rows) {
      doc["results"].push_back({{"quantity", r.quantity}, {"value", std::stod(real(r.value))}, {"unit", r.unit}});
    }
    table = doc.dump(2) + "\n";
    name = "limits.json";
  } else {
    std::ostringstream t;
    char line[128];
    std::snprintf(line, sizeof line, "%-26s %-20s %s\n", "quantity", "value", "unit");
    t << line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%-26s %-20s %s\n", r.quantity.c_str(), real(r.value).c_str(),
                    r.unit.c_str());
      t << line;
    }
    t << "constants: " << kConstantsVersion << '\n';
    table = t.str();
    name = "limits.txt";
  }
  out << table;
  RunOutputs outputs("limits", dir);
  outputs.write(name, table);
  outputs.finish(params.dump(), std::nullopt, params);
  return kExitOk;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_real(double value, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum information toolkit: circuits, EPR sampling, path integrals, physical limits", "qtk"};
  app.require_subcommand(1);
  std::string out_flag;
  app.add_option("--out", out_flag, "Output directory (default: $" + std::string(kOutputDirEnv) + " or .)");

  CircuitArgs circuit_args;
  auto* circuit = app.add_subcommand("circuit", "Simulate a circuit file and sample its MEASURE directive");
  circuit->add_option("file", circuit_args.file, "Circuit file")->required();
  circuit->add_option("--shots", circuit_args.shots, "Override the shot count");
  circuit->add_option("--seed", circuit_args.seed, "Override the seed");
  circuit->add_option("--out", out_flag, "Output directory");

  EprArgs epr_args;
  auto* epr = app.add_subcommand("epr", "Sample singlet spin correlations");
  epr->add_option("--angle-a", epr_args.angle_a, "Observer A angle(s) from z in the x-z plane, radians; several form a per-shot schedule")
      ->required();
  epr->add_option("--angle-b", epr_args.angle_b, "Observer B angle, radians")->required();
  epr->add_option("--shots", epr_args.shots, "Number of pairs")->check(CLI::PositiveNumber);
  epr->add_option("--seed", epr_args.seed, "Random seed");
  epr->add_option("--out", out_flag, "Output directory");

  DoubleSlitArgs ds_args;
  auto* doubleslit = app.add_subcommand("doubleslit", "Two-slit screen pattern from an experiment descriptor");
  doubleslit->add_option("--config", ds_args.config, "JSON experiment descriptor")->required();
  auto* flux_opt = doubleslit->add_option("--flux", ds_args.flux, "Enclosed flux (overrides the descriptor)");
  doubleslit->add_option("--phase", ds_args.phase, "Slit-b phase in radians (overrides flux)")->excludes(flux_opt);
  doubleslit->add_option("--out", out_flag, "Output directory");

  std::string prop_config;
  auto* propagator = app.add_subcommand("propagator", "Propagate a point source or wave packet");
  propagator->add_option("--config", prop_config, "JSON experiment descriptor")->required();
  propagator->add_option("--out", out_flag, "Output directory");

  LimitsArgs limits_args;
  auto* limits_cmd = app.add_subcommand("limits", "Closed-form physical limits (SI units)");
  limits_cmd->add_option("--mass", limits_args.mass, "Mass in kg")->check(CLI::PositiveNumber);
  limits_cmd->add_option("--temperature", limits_args.temperature, "Temperature in K")->check(CLI::PositiveNumber);
  limits_cmd->add_option("--bandwidth", limits_args.bandwidth, "Channel bandwidth in Hz")->check(CLI::NonNegativeNumber);
  limits_cmd->add_option("--snr", limits_args.snr, "Signal-to-noise power ratio")->check(CLI::NonNegativeNumber);
  limits_cmd->add_flag("--json", limits_args.as_json, "Emit JSON instead of a text table");
  limits_cmd->add_option("--out", out_flag, "Output directory");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("qtk");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsageError;
  }

  try {
    const fs::path dir = output_dir(out_flag);
    if (circuit->parsed()) return run_circuit(circuit_args, dir, out);
    if (epr->parsed()) return run_epr(epr_args, dir, out);
    if (doubleslit->parsed()) return run_doubleslit(ds_args, dir, out);
    if (propagator->parsed()) return run_propagator(prop_config, dir, out);
    if (limits_cmd->parsed()) {
      if (!limits_args.mass && !limits_args.temperature && !limits_args.bandwidth && !limits_args.snr) {
        err << "limits: give at least one of --mass, --temperature, --bandwidth/--snr\n";
        return kExitUsageError;
      }
      return run_limits(limits_args, dir, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitUsageError;
}

}  // namespace qtk::cli
