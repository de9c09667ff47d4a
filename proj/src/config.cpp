#include "spectral/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace spectral {

using nlohmann::json;

namespace {

ComplexMatrix parse_complex_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ConfigError("config: field '" + field + "' must be a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw ConfigError("config: ragged rows in field '" + field + "'");
    for (int c = 0; c < cols; ++c) {
      const json& e = j[r][c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("config: entries of '" + field + "' must be [re, im] pairs");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json complex_matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

State parse_state(const json& j, const std::string& name) {
  try {
    if (j.contains("weights")) {
      if (!j["weights"].is_array())
        throw ConfigError("config: state '" + name + "': weights must be an array");
      return State::probability(j["weights"].get<std::vector<double>>());
    }
    if (j.contains("density"))
      return State::density(
          HermitianOperator(parse_complex_matrix(j["density"], "states." + name)));
  } catch (const std::domain_error& e) {
    throw ConfigError("config: state '" + name + "': " + e.what());
  }
  throw ConfigError("config: state '" + name + "' needs 'weights' or 'density'");
}

}  // namespace

TripleConfig parse_triple_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }

  TripleConfig cfg;
  try {
    if (!j.contains("algebra")) throw ConfigError("config: missing field 'algebra'");
    const json& alg = j["algebra"];
    const std::string kind = alg.value("kind", "");
    const int n = alg.value("n", 0);
    if (kind == "commutative") {
      if (alg.contains("slots"))
        cfg.algebra = FiniteAlgebra::commutative(
            n, alg["slots"].get<std::vector<std::vector<int>>>());
      else
        cfg.algebra = FiniteAlgebra::commutative(n);
    } else if (kind == "matrix") {
      cfg.algebra = FiniteAlgebra::full_matrix(n);
    } else {
      throw ConfigError("config: algebra.kind must be 'commutative' or 'matrix'");
    }

    if (!j.contains("dirac")) throw ConfigError("config: missing field 'dirac'");
    cfg.dirac = parse_complex_matrix(j["dirac"], "dirac");

    if (j.contains("states"))
      for (const auto& [name, body] : j["states"].items())
        cfg.states.emplace(name, parse_state(body, name));

    if (j.contains("solver")) {
      const json& s = j["solver"];
      cfg.solver.tol = s.value("tol", cfg.solver.tol);
      cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
      cfg.solver.polish_tol = s.value("polish_tol", cfg.solver.polish_tol);
    }

    // re-check every triple invariant on load
    cfg.make_triple();
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

TripleConfig load_triple_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_triple_config(buf.str());
}

std::string serialize_triple_config(const TripleConfig& config) {
  json j;
  j["algebra"]["kind"] =
      config.algebra.kind == AlgebraKind::Commutative ? "commutative" : "matrix";
  j["algebra"]["n"] = config.algebra.n;
  if (config.algebra.kind == AlgebraKind::Commutative)
    j["algebra"]["slots"] = config.algebra.slots;
  j["dirac"] = complex_matrix_to_json(config.dirac);
  if (!config.states.empty()) {
    json states = json::object();
    for (const auto& [name, state] : config.states) {
      if (state.kind() == AlgebraKind::Commutative)
        states[name]["weights"] = state.weights();
      else
        states[name]["density"] = complex_matrix_to_json(state.rho());
    }
    j["states"] = std::move(states);
  }
  j["solver"]["tol"] = config.solver.tol;
  j["solver"]["max_iter"] = config.solver.max_iter;
  j["solver"]["polish_tol"] = config.solver.polish_tol;
  return j.dump(2) + "\n";
}

State parse_inline_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      w.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("config: bad inline weight '" + tok + "'");
    }
  }
  try {
    return State::probability(std::move(w));
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: inline state: ") + e.what());
  }
}

}  // namespace spectral
