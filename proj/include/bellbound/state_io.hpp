#pragma once

// JSON state files:
//   {"kind": "pure",    "data": [[re, im] x 4]}
//   {"kind": "density", "data": [[re, im] x 16]}   (row-major)
// Parsing validates the state invariants and names the one that failed.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "bellbound/states.hpp"

namespace bellbound {

struct StateFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using StateVariant = std::variant<PureState, DensityMatrix>;

namespace detail {

inline Complex parse_complex_entry(const nlohmann::json& e, std::size_t index) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw StateFormatError("state file: data[" + std::to_string(index) +
                           "] must be a [re, im] pair of numbers");
  }
  return Complex(e[0].get<double>(), e[1].get<double>());
}

}  // namespace detail

inline StateVariant parse_state(const nlohmann::json& j) {
  if (!j.is_object()) throw StateFormatError("state file: top level must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw StateFormatError("state file: missing string field \"kind\"");
  }
  if (!j.contains("data") || !j["data"].is_array()) {
    throw StateFormatError("state file: missing array field \"data\"");
  }
  const std::string kind = j["kind"].get<std::string>();
  const nlohmann::json& data = j["data"];

  if (kind == "pure") {
    if (data.size() != 4) {
      throw StateFormatError("state file: pure state needs 4 amplitudes, got " +
                             std::to_string(data.size()));
    }
    CVector4 v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = detail::parse_complex_entry(data[i], i);
    return PureState(v);
  }
  if (kind == "density") {
    if (data.size() != 16) {
      throw StateFormatError("state file: density matrix needs 16 row-major entries, got " +
                             std::to_string(data.size()));
    }
    CMatrix4 m;
    for (std::size_t i = 0; i < 16; ++i) m.entries[i] = detail::parse_complex_entry(data[i], i);
    return DensityMatrix(m);
  }
  throw StateFormatError("state file: kind must be \"pure\" or \"density\", got \"" + kind + "\"");
}

inline StateVariant load_state_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw StateFormatError(std::string("state file: invalid JSON: ") + e.what());
  }
  return parse_state(j);
}

inline StateVariant load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StateFormatError("state file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_state_json(buf.str());
}

inline nlohmann::json state_to_json(const PureState& p) {
  nlohmann::json data = nlohmann::json::array();
  for (std::size_t i = 0; i < 4; ++i) data.push_back({p[i].real(), p[i].imag()});
  return nlohmann::json{{"kind", "pure"}, {"data", data}};
}

inline nlohmann::json state_to_json(const DensityMatrix& rho) {
  nlohmann::json data = nlohmann::json::array();
  for (const Complex& c : rho.matrix().entries) data.push_back({c.real(), c.imag()});
  return nlohmann::json{{"kind", "density"}, {"data", data}};
}

inline void save_state_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StateFormatError("state file: cannot write " + path);
  out << j.dump(2) << '\n';
}

inline bool holds_pure(const StateVariant& s) { return std::holds_alternative<PureState>(s); }

inline DensityMatrix as_density(const StateVariant& s) {
  if (holds_pure(s)) return pure_to_density(std::get<PureState>(s));
  return std::get<DensityMatrix>(s);
}

}  // namespace bellbound
