#pragma once

// Quadrature backends for the trace functionals: spectrally accurate
// trapezoid sums on the unit circle, Gauss-Legendre panels on radial
// segments, an algebraic-decay substitution for improper tails, and the
// exact antiderivatives of r^{d+1} log^l r used by the cut-off constants.
// Every numeric integral is certified by node doubling against a relative
// tolerance.

#include <functional>
#include <vector>

#include "nctsym/common.hpp"

namespace nctsym {

struct QuadratureConfig {
  int circle_nodes = 1024;  // power of two
  int radial_nodes = 256;
  double r0 = 0.5;  // chi == 0 for r <= r0
  double r1 = 1.0;  // chi == 1 for r >= r1
  int depth = 6;    // remainder depth N
  double tol = 1e-9;

  void validate() const;
};

// Smooth C^2 cut-off: 0 below r0, 1 above r1, quintic smoothstep between.
double chi_cutoff(double r, const QuadratureConfig& cfg);
double chi_between(double r, double r0, double r1);

// Convergence bookkeeping carried through composite integrals.
struct ConvergenceInfo {
  double circle_drift = 0.0;
  double radial_drift = 0.0;
  int circle_nodes = 0;
  int radial_nodes = 0;

  void absorb_circle(double drift, int nodes);
  void absorb_radial(double drift, int nodes);
  void merge(const ConvergenceInfo& other);
  double max_drift() const { return std::max(circle_drift, radial_drift); }
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int n);

// integral over [a, b] with an n-point rule
Cplx gl_integrate(const std::function<Cplx(double)>& f, double a, double b, int n);

// Node-doubled variants; the finer value is returned and the relative drift
// recorded.  Throws ConvergenceError when the drift exceeds tol.
Cplx gl_integrate_checked(const std::function<Cplx(double)>& f, double a, double b, int n,
                          double tol, ConvergenceInfo* conv, const char* what);

// (2 pi)^{-2} * integral over the unit circle (arclength), i.e. total mass
// 1/(2 pi); trapezoid rule with doubling check.
Cplx circle_integral_scalar(const std::function<Cplx(double)>& f_angle, int nodes, double tol,
                            ConvergenceInfo* conv = nullptr);

// integral_{a}^{infinity} f(r) dr via r = a + s/(1-s), Gauss-Legendre in s,
// with doubling check.
Cplx improper_radial_integral(const std::function<Cplx(double)>& f, double a, int n, double tol,
                              ConvergenceInfo* conv = nullptr);

// Exact antiderivative F with F' (r) = r^{d+1} log^l r for d != -2:
//   F(r) = r^{d+2} sum_{i=0}^{l} (-1)^i l!/(l-i)! log^{l-i} r / (d+2)^{i+1};
// for d == -2 it is log^{l+1} r / (l+1).
Cplx radial_antiderivative(Cplx d, int l, double r);

// The finite-part constant contributed by the [1, R) range of a homogeneous
// term r^d log^l r: -F(1), i.e. -(-1)^l l! / (d+2)^{l+1}; zero when d == -2
// (a pure divergence with no constant term).
Cplx radial_finite_part_constant(Cplx d, int l);

}  // namespace nctsym
