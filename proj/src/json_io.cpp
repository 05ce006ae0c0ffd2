#include "nctsym/json_io.hpp"

#include <cstdio>
#include <sstream>

namespace nctsym {

nlohmann::json algebra_to_json(const AlgebraElement& a) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [mode, amp] : a.coeffs())
    terms.push_back({{"m", mode.first},
                     {"n", mode.second},
                     {"re", amp.real()},
                     {"im", amp.imag()}});
  return {{"theta", a.theta()}, {"terms", terms}};
}

AlgebraElement algebra_from_json(const nlohmann::json& j) {
  if (!j.contains("theta") || !j.contains("terms"))
    throw std::invalid_argument("algebra element JSON needs 'theta' and 'terms'");
  AlgebraElement a(j.at("theta").get<double>());
  for (const auto& t : j.at("terms"))
    a += AlgebraElement::monomial(a.theta(), t.at("m").get<int>(), t.at("n").get<int>(),
                                  Cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  return a;
}

nlohmann::json quadrature_to_json(const QuadratureConfig& cfg) {
  return {{"circle_nodes", cfg.circle_nodes}, {"radial_nodes", cfg.radial_nodes},
          {"r0", cfg.r0},                     {"r1", cfg.r1},
          {"depth", cfg.depth},               {"tol", cfg.tol}};
}

QuadratureConfig quadrature_from_json(const nlohmann::json& j) {
  QuadratureConfig cfg;
  if (j.contains("circle_nodes")) cfg.circle_nodes = j.at("circle_nodes").get<int>();
  if (j.contains("radial_nodes")) cfg.radial_nodes = j.at("radial_nodes").get<int>();
  if (j.contains("r0")) cfg.r0 = j.at("r0").get<double>();
  if (j.contains("r1")) cfg.r1 = j.at("r1").get<double>();
  if (j.contains("depth")) cfg.depth = j.at("depth").get<int>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  cfg.validate();
  return cfg;
}

nlohmann::json symbol_to_json(const OperatorSymbol& sym) {
  nlohmann::json comps = nlohmann::json::object();
  for (const auto& [key, comp] : sym.components()) {
    Cplx degree = sym.order() - Cplx(double(key.first));
    std::string tag = "(" + format_double(degree.real()) +
                      (degree.imag() != 0.0 ? "+" + format_double(degree.imag()) + "i" : "") +
                      ", " + std::to_string(key.second) + ")";
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& [mode, f] : comp) {
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& t : f.terms()) {
        nlohmann::json zc = nlohmann::json::array();
        for (const auto& c : t.zc) zc.push_back({{"re", c.real()}, {"im", c.imag()}});
        terms.push_back({{"zc", zc},
                         {"a", t.a},
                         {"b", t.b},
                         {"el", t.el},
                         {"elb", t.elb},
                         {"er", t.er},
                         {"pLam", t.pLam},
                         {"pL0", t.pL0},
                         {"zflag", t.zflag},
                         {"gs", {{"re", t.gs.real()}, {"im", t.gs.imag()}}}});
      }
      modes.push_back({{"m", mode.first}, {"n", mode.second}, {"terms", terms}});
    }
    comps[tag] = modes;
  }
  return {{"order", {{"re", sym.order().real()}, {"im", sym.order().imag()}}},
          {"trunc", sym.trunc()},
          {"exact", sym.is_exact()},
          {"components", comps}};
}

nlohmann::json spectrum_to_json(const Eigen::MatrixXcd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
  nlohmann::json values = nlohmann::json::array();
  for (int i = 0; i < es.eigenvalues().size(); ++i) values.push_back(es.eigenvalues()(i));
  return {{"dim", hermitian.rows()}, {"eigenvalues", values}};
}

CauchyRiemannFamily Scenario::family() const {
  CauchyRiemannFamily fam;
  fam.ctx = context();
  fam.alpha0 = alpha0;
  fam.beta = beta;
  fam.w = w;
  fam.depth = depth;
  fam.quad = quadrature;
  fam.fd_steps = fd_steps;
  return fam;
}

std::vector<int> Scenario::certificate_boxes() const {
  return {std::max(4, lattice_M / 2), std::max(6, 3 * lattice_M / 4), lattice_M};
}

std::vector<int> Scenario::sweep_boxes() const {
  return {lattice_M, lattice_M + 8, lattice_M + 16, lattice_M + 24};
}

namespace {

Cplx complex_from_json(const nlohmann::json& j) {
  return Cplx(j.at("re").get<double>(), j.at("im").get<double>());
}

}  // namespace

Scenario default_scenario(double theta, Cplx tau) {
  Scenario s;
  s.theta = theta;
  s.tau = tau;
  s.alpha0 = AlgebraElement::unit(theta, Cplx(0.42, 0.13)) +
             AlgebraElement::monomial(theta, 1, 0, Cplx(0.06, -0.02)) +
             AlgebraElement::monomial(theta, 0, 1, Cplx(0.04, 0.02));
  s.beta = AlgebraElement::monomial(theta, 1, 0);
  s.w = Cplx(0.05, -0.02);
  return s;
}

Scenario default_scenario() { return default_scenario(kDefaultTheta, Cplx(0.0, 1.0)); }

Scenario scenario_from_json(const nlohmann::json& j) {
  double theta = j.contains("theta") ? j.at("theta").get<double>() : kDefaultTheta;
  Cplx tau = j.contains("tau") ? complex_from_json(j.at("tau")) : Cplx(0.0, 1.0);
  if (tau.imag() <= 0.0) throw std::invalid_argument("scenario: Im(tau) must be positive");
  Scenario s = default_scenario(theta, tau);
  if (j.contains("alpha0")) s.alpha0 = algebra_from_json(j.at("alpha0"));
  if (j.contains("beta")) s.beta = algebra_from_json(j.at("beta"));
  if (j.contains("w")) s.w = complex_from_json(j.at("w"));
  if (j.contains("depth")) s.depth = j.at("depth").get<int>();
  if (j.contains("quadrature")) s.quadrature = quadrature_from_json(j.at("quadrature"));
  if (j.contains("fd_steps")) s.fd_steps = j.at("fd_steps").get<std::vector<double>>();
  if (j.contains("lattice_M")) s.lattice_M = j.at("lattice_M").get<int>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (s.alpha0.theta() != s.theta || s.beta.theta() != s.theta)
    throw std::invalid_argument("scenario: element theta differs from the scenario theta");
  if (s.depth < 1 || s.lattice_M < 2) throw std::invalid_argument("scenario: bad depth or lattice_M");
  s.quadrature.validate();
  return s;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string complex_json(Cplx v) {
  return "{\"re\": " + format_double(v.real()) + ", \"im\": " + format_double(v.imag()) + "}";
}

}  // namespace

Report::Report(std::string command, const Scenario& scenario) : command_(std::move(command)) {
  std::ostringstream os;
  os << "{\"theta\": " << format_double(scenario.theta)
     << ", \"tau\": " << complex_json(scenario.tau)
     << ", \"w\": " << complex_json(scenario.w) << ", \"depth\": " << scenario.depth
     << ", \"lattice_M\": " << scenario.lattice_M << ", \"seed\": " << scenario.seed
     << ", \"quadrature\": {\"circle_nodes\": " << scenario.quadrature.circle_nodes
     << ", \"radial_nodes\": " << scenario.quadrature.radial_nodes
     << ", \"r0\": " << format_double(scenario.quadrature.r0)
     << ", \"r1\": " << format_double(scenario.quadrature.r1)
     << ", \"depth\": " << scenario.quadrature.depth
     << ", \"tol\": " << format_double(scenario.quadrature.tol) << "}"
     << ", \"alpha0_terms\": " << scenario.alpha0.support_size()
     << ", \"beta_terms\": " << scenario.beta.support_size() << "}";
  settings_ = os.str();
}

void Report::add(CheckRow row) { rows_.push_back(std::move(row)); }

void Report::check(const std::string& name, Cplx value, Cplx expected, double tolerance,
                   const std::string& diagnostic) {
  CheckRow row;
  row.name = name;
  row.value = value;
  row.expected = expected;
  row.tolerance = tolerance;
  row.deviation = std::abs(value - expected);
  row.diagnostic = diagnostic;
  row.pass = row.deviation <= tolerance;
  rows_.push_back(std::move(row));
}

void Report::note(const std::string& name, Cplx value, const std::string& diagnostic) {
  CheckRow row;
  row.name = name;
  row.value = value;
  row.expected = value;
  row.tolerance = 0.0;
  row.deviation = 0.0;
  row.diagnostic = diagnostic;
  row.pass = true;
  rows_.push_back(std::move(row));
}

void Report::result(const std::string& key, Cplx value) {
  results_.emplace_back(key, complex_json(value));
}

void Report::result(const std::string& key, double value) {
  results_.emplace_back(key, format_double(value));
}

bool Report::all_passed() const {
  for (const auto& r : rows_)
    if (!r.pass) return false;
  return true;
}

std::string Report::to_json() const {
  std::ostringstream os;
  os << "{\n  \"command\": \"" << json_escape(command_) << "\",\n";
  os << "  \"settings\": " << settings_ << ",\n";
  os << "  \"checks\": [";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const CheckRow& r = rows_[i];
    os << (i ? ",\n    " : "\n    ");
    os << "{\"name\": \"" << json_escape(r.name) << "\", \"value\": " << complex_json(r.value)
       << ", \"expected\": " << complex_json(r.expected)
       << ", \"tolerance\": " << format_double(r.tolerance)
       << ", \"deviation\": " << format_double(r.deviation) << ", \"diagnostic\": \""
       << json_escape(r.diagnostic) << "\", \"pass\": " << (r.pass ? "true" : "false") << "}";
  }
  os << (rows_.empty() ? "]" : "\n  ]") << ",\n";
  if (!results_.empty()) {
    os << "  \"results\": {";
    for (std::size_t i = 0; i < results_.size(); ++i)
      os << (i ? ", " : "") << "\"" << json_escape(results_[i].first)
         << "\": " << results_[i].second;
    os << "},\n";
  }
  std::size_t passed = 0;
  for (const auto& r : rows_) passed += r.pass ? 1u : 0u;
  os << "  \"summary\": {\"total\": " << rows_.size() << ", \"passed\": " << passed << "},\n";
  os << "  \"pass\": " << (all_passed() ? "true" : "false") << "\n}\n";
  return os.str();
}

std::string Report::to_table() const {
  std::ostringstream os;
  os << command_ << ": " << rows_.size() << " checks\n";
  for (const auto& r : rows_) {
    os << "  [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << "  value=("
       << format_double(r.value.real()) << ", " << format_double(r.value.imag())
       << ")  deviation=" << format_double(r.deviation)
       << "  tol=" << format_double(r.tolerance);
    if (!r.diagnostic.empty()) os << "  [" << r.diagnostic << "]";
    os << "\n";
  }
  return os.str();
}

}  // namespace nctsym
