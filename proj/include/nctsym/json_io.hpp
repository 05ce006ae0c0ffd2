#pragma once

// JSON schemas for the CLI: algebra elements, quadrature settings, scenarios
// and reports.  Reports are emitted through a small dedicated writer so that
// key order is stable and every float is printed with 12 significant digits
// (byte-identical reruns given identical inputs).

#include <string>
#include <vector>

#include <json.hpp>

#include "nctsym/curvature.hpp"

namespace nctsym {

// {"theta": number, "terms": [{"m": int, "n": int, "re": num, "im": num}]}
nlohmann::json algebra_to_json(const AlgebraElement& a);
AlgebraElement algebra_from_json(const nlohmann::json& j);

nlohmann::json quadrature_to_json(const QuadratureConfig& cfg);
QuadratureConfig quadrature_from_json(const nlohmann::json& j);

// Debug dump of a symbol: components keyed by "(degree, logpower)", each a
// list of {m, n, terms} with the term factor exponents spelled out.
nlohmann::json symbol_to_json(const OperatorSymbol& sym);

// Spectrum of a lattice operator (ascending eigenvalues of its Hermitian
// matrix) for regression baselines.
nlohmann::json spectrum_to_json(const Eigen::MatrixXcd& hermitian);

struct Scenario {
  double theta = kDefaultTheta;
  Cplx tau{0.0, 1.0};
  AlgebraElement alpha0{kDefaultTheta};
  AlgebraElement beta{kDefaultTheta};
  Cplx w{0.0};
  int depth = kDefaultDepth;
  QuadratureConfig quadrature;
  std::vector<double> fd_steps{1e-3, 1e-4};
  int lattice_M = 16;
  std::uint64_t seed = 2026;

  // box sizes derived from lattice_M: {M/2, 3M/4, M} for certificates and
  // {M, M+8, M+16, M+24} for trace sweeps
  std::vector<int> certificate_boxes() const;
  std::vector<int> sweep_boxes() const;

  SymbolContext context() const { return {theta, tau}; }
  CauchyRiemannFamily family() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
Scenario default_scenario();
Scenario default_scenario(double theta, Cplx tau);

// Report assembly: one row per executed check.
struct CheckRow {
  std::string name;
  Cplx value{0.0};
  Cplx expected{0.0};
  double tolerance = 0.0;
  double deviation = 0.0;
  std::string diagnostic;
  bool pass = false;
};

class Report {
public:
  Report(std::string command, const Scenario& scenario);

  void add(CheckRow row);
  // convenience: deviation = |value - expected|, pass iff within tolerance
  void check(const std::string& name, Cplx value, Cplx expected, double tolerance,
             const std::string& diagnostic = "");
  void note(const std::string& name, Cplx value, const std::string& diagnostic = "");
  // named top-level result values (serialized under "results")
  void result(const std::string& key, Cplx value);
  void result(const std::string& key, double value);

  bool all_passed() const;
  std::size_t size() const { return rows_.size(); }

  // deterministic serialization: fixed key order, "%.12g" floats
  std::string to_json() const;
  std::string to_table() const;

private:
  std::string command_;
  std::string settings_;
  std::vector<CheckRow> rows_;
  std::vector<std::pair<std::string, std::string>> results_;
};

std::string format_double(double x);  // %.12g

}  // namespace nctsym
