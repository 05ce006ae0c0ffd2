#include "nctsym/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace nctsym {

void QuadratureConfig::validate() const {
  if (!(r0 > 0.0 && r0 < r1 && r1 <= 1.0))
    throw std::invalid_argument("QuadratureConfig: need 0 < r0 < r1 <= 1");
  if (circle_nodes < 8 || (circle_nodes & (circle_nodes - 1)) != 0)
    throw std::invalid_argument("QuadratureConfig: circle_nodes must be a power of two >= 8");
  if (radial_nodes < 4) throw std::invalid_argument("QuadratureConfig: radial_nodes too small");
  if (depth < 1) throw std::invalid_argument("QuadratureConfig: depth must be >= 1");
  if (tol <= 0.0) throw std::invalid_argument("QuadratureConfig: tol must be positive");
}

double chi_between(double r, double r0, double r1) {
  if (r <= r0) return 0.0;
  if (r >= r1) return 1.0;
  double t = (r - r0) / (r1 - r0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double chi_cutoff(double r, const QuadratureConfig& cfg) {
  return chi_between(r, cfg.r0, cfg.r1);
}

void ConvergenceInfo::absorb_circle(double drift, int nodes) {
  circle_drift = std::max(circle_drift, drift);
  circle_nodes = std::max(circle_nodes, nodes);
}

void ConvergenceInfo::absorb_radial(double drift, int nodes) {
  radial_drift = std::max(radial_drift, drift);
  radial_nodes = std::max(radial_nodes, nodes);
}

void ConvergenceInfo::merge(const ConvergenceInfo& other) {
  absorb_circle(other.circle_drift, other.circle_nodes);
  absorb_radial(other.radial_drift, other.radial_nodes);
}

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(std::size_t(n));
  rule.weights.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev-like initial guess
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {  // ascend the Legendre recurrence
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      double dp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p1 = 0.0;
    p0 = 1.0;
    for (int k = 0; k < n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
    }
    double dp = n * (x * p0 - p1) / (x * x - 1.0);
    rule.nodes[std::size_t(n - 1 - i)] = x;
    rule.weights[std::size_t(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

Cplx gl_integrate(const std::function<Cplx(double)>& f, double a, double b, int n) {
  const GaussLegendreRule& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Cplx acc(0.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

Cplx gl_integrate_checked(const std::function<Cplx(double)>& f, double a, double b, int n,
                          double tol, ConvergenceInfo* conv, const char* what) {
  Cplx coarse = gl_integrate(f, a, b, n);
  Cplx fine = gl_integrate(f, a, b, 2 * n);
  double drift = std::abs(fine - coarse) / std::max(1.0, std::abs(fine));
  if (conv) conv->absorb_radial(drift, 2 * n);
  if (drift > tol)
    throw ConvergenceError(std::string("radial quadrature did not converge: ") + what);
  return fine;
}

namespace {

Cplx circle_trapezoid(const std::function<Cplx(double)>& f, int nodes) {
  Cplx acc(0.0);
  for (int i = 0; i < nodes; ++i) {
    Cplx v = f(kTwoPi * i / nodes);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::domain_error("circle integrand is singular on |xi| = 1");
    acc += v;
  }
  return acc / (kTwoPi * double(nodes));
}

}  // namespace

Cplx circle_integral_scalar(const std::function<Cplx(double)>& f_angle, int nodes, double tol,
                            ConvergenceInfo* conv) {
  Cplx coarse = circle_trapezoid(f_angle, nodes);
  Cplx fine = circle_trapezoid(f_angle, 2 * nodes);
  double drift = std::abs(fine - coarse) / std::max(1.0, std::abs(fine));
  if (conv) conv->absorb_circle(drift, 2 * nodes);
  if (drift > tol) throw ConvergenceError("circle quadrature did not converge");
  return fine;
}

Cplx improper_radial_integral(const std::function<Cplx(double)>& f, double a, int n, double tol,
                              ConvergenceInfo* conv) {
  auto g = [&](double s) {
    double om = 1.0 - s;
    double r = a + s / om;
    return f(r) / (om * om);
  };
  Cplx coarse = gl_integrate(g, 0.0, 1.0, n);
  Cplx fine = gl_integrate(g, 0.0, 1.0, 2 * n);
  double drift = std::abs(fine - coarse) / std::max(1.0, std::abs(fine));
  if (conv) conv->absorb_radial(drift, 2 * n);
  if (drift > tol) throw ConvergenceError("improper radial integral did not converge");
  return fine;
}

Cplx radial_antiderivative(Cplx d, int l, double r) {
  const double lg = std::log(r);
  if (std::abs(d + 2.0) < 1e-12) return ipow(Cplx(lg), l + 1) / double(l + 1);
  Cplx acc(0.0);
  double sign_fact = 1.0;  // (-1)^i l!/(l-i)!
  Cplx denom = d + 2.0;
  for (int i = 0; i <= l; ++i) {
    acc += sign_fact * ipow(Cplx(lg), l - i) / ipow(denom, i + 1);
    sign_fact *= -double(l - i);
  }
  return std::exp((d + 2.0) * lg) * acc;
}

Cplx radial_finite_part_constant(Cplx d, int l) {
  if (std::abs(d + 2.0) < 1e-12) return Cplx(0.0);
  return -radial_antiderivative(d, l, 1.0);
}

}  // namespace nctsym
