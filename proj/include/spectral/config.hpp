#pragma once

#include "spectral/metric.hpp"
#include "spectral/triple.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace spectral {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A spectral triple plus optional named states and solver tolerances, as
/// described by a JSON config file (complex entries are [re, im] pairs,
/// slot indices 0-based).
struct TripleConfig {
  FiniteAlgebra algebra = FiniteAlgebra::commutative(1);
  ComplexMatrix dirac;
  std::map<std::string, State> states;
  SolverOptions solver;

  FiniteSpectralTriple make_triple() const {
    return FiniteSpectralTriple(algebra, HermitianOperator(dirac));
  }
};

TripleConfig parse_triple_config(const std::string& json_text);
TripleConfig load_triple_config(const std::string& path);
std::string serialize_triple_config(const TripleConfig& config);

/// Parses an inline state: comma-separated weights such as "0.5,0.3,0.2".
State parse_inline_weights(const std::string& text);

}  // namespace spectral
