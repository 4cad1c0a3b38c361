#include "qtk/experiment.hpp"

#include <string>

namespace qtk::cli {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw DomainError(std::string("descriptor is missing \"") + key + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw DomainError("\"" + key + "\" must be a number");
  return v.get<double>();
}

std::size_t index(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) throw DomainError("\"" + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

double number_or(const json& obj, const char* key, double fallback) {
  return obj.contains(key) ? number(obj.at(key), key) : fallback;
}

pathint::SiteRange site_range(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) {
    const auto s = v.get<std::size_t>();
    return {s, s};
  }
  if (!v.is_array() || v.size() != 2) throw DomainError("\"" + key + "\" must be a site or [first, last]");
  return {index(v[0], key), index(v[1], key)};
}

std::vector<double> per_site_array(const json& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

std::vector<double> potential_profile(const json& v, const pathint::PathLattice& lat) {
  if (v.is_string()) {
    if (v.get<std::string>() == "free") return {};
    throw DomainError("unknown potential profile \"" + v.get<std::string>() + "\"");
  }
  if (v.is_array()) return per_site_array(v, "potential");
  if (!v.is_object()) throw DomainError("\"potential\" must be a name, an array or an object");
  const std::string name = require(v, "profile").get<std::string>();
  std::vector<double> out(lat.n_sites, 0.0);
  if (name == "free") return {};
  if (name == "harmonic") {
    const double omega = number(require(v, "omega"), "omega");
    const double center = lat.position(index(require(v, "center"), "center"));
    for (std::size_t i = 0; i < lat.n_sites; ++i) {
      const double d = lat.position(i) - center;
      out[i] = 0.5 * lat.mass * omega * omega * d * d;
    }
    return out;
  }
  if (name == "barrier") {
    const double height = number(require(v, "height"), "height");
    const std::size_t first = index(require(v, "first"), "first");
    const std::size_t last = index(require(v, "last"), "last");
    if (first > last || last >= lat.n_sites) throw DomainError("barrier sites outside the lattice");
    for (std::size_t i = first; i <= last; ++i) out[i] = height;
    return out;
  }
  throw DomainError("unknown potential profile \"" + name + "\"");
}

}  // namespace

double Experiment::slit_phase() const { return phase ? *phase : pathint::ab_phase(lattice, flux); }

Experiment experiment_from_json(const json& doc) {
  if (!doc.is_object()) throw DomainError("descriptor must be a JSON object");
  Experiment ex;
  const json& lat = require(doc, "lattice");
  auto& l = ex.lattice;
  l.n_slices = index(require(lat, "n_slices"), "n_slices");
  l.n_sites = index(require(lat, "n_sites"), "n_sites");
  l.dx = number_or(lat, "dx", 1.0);
  l.dt = number_or(lat, "dt", 1.0);
  l.mass = number_or(lat, "mass", 1.0);
  l.hbar = number_or(lat, "hbar", 1.0);
  l.charge = number_or(lat, "charge", 1.0);
  l.light_speed = number_or(lat, "light_speed", 1.0);
  if (lat.contains("boundary")) {
    const std::string b = lat.at("boundary").get<std::string>();
    if (b == "reflecting") {
      l.boundary = pathint::Boundary::Reflecting;
    } else if (b == "periodic") {
      l.boundary = pathint::Boundary::Periodic;
    } else {
      throw DomainError("boundary must be \"reflecting\" or \"periodic\"");
    }
  }
  if (doc.contains("potential")) l.potential = potential_profile(doc.at("potential"), l);
  if (doc.contains("vector_potential")) l.vector_potential = per_site_array(doc.at("vector_potential"), "vector_potential");
  l.validate();

  if (doc.contains("source")) ex.source = index(doc.at("source"), "source");
  if (doc.contains("packet")) {
    const json& p = doc.at("packet");
    pathint::WavePacket packet;
    packet.center = index(require(p, "center"), "center");
    packet.width = number(require(p, "width"), "width");
    packet.momentum = number_or(p, "momentum", 0.0);
    ex.packet = packet;
  }
  if (doc.contains("slits")) {
    const json& s = doc.at("slits");
    pathint::DoubleSlit slits;
    slits.gate_slice = s.contains("gate_slice") ? index(s.at("gate_slice"), "gate_slice") : 1;
    slits.slit_a = site_range(require(s, "a"), "a");
    slits.slit_b = site_range(require(s, "b"), "b");
    ex.slits = slits;
  }
  ex.flux = number_or(doc, "flux", 0.0);
  if (doc.contains("phase")) ex.phase = number(doc.at("phase"), "phase");
  if (doc.contains("record_slices")) {
    for (const auto& s : doc.at("record_slices")) ex.record_slices.push_back(index(s, "record_slices"));
  }
  if (doc.contains("renormalize")) ex.renormalize = doc.at("renormalize").get<bool>();
  return ex;
}

}  // namespace qtk::cli
