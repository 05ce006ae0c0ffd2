#pragma once

// Exact arithmetic in the smooth noncommutative two torus restricted to
// finitely supported Fourier series  a = sum_{m,n} a_{mn} U^m V^n,
// with the commutation relation VU = e^{2 pi i theta} UV.

#include <map>
#include <utility>

#include "nctsym/common.hpp"

namespace nctsym {

enum class Derivation { delta1, delta2, dbar, dbar_star };

class AlgebraElement {
public:
  using ModeKey = std::pair<int, int>;
  using CoeffMap = std::map<ModeKey, Cplx>;

  AlgebraElement() : theta_(kDefaultTheta) {}
  explicit AlgebraElement(double theta) : theta_(theta) {}
  AlgebraElement(double theta, CoeffMap coeffs);

  static AlgebraElement zero(double theta) { return AlgebraElement(theta); }
  static AlgebraElement unit(double theta, Cplx amp = 1.0);
  static AlgebraElement monomial(double theta, int m, int n, Cplx amp = 1.0);

  double theta() const { return theta_; }
  const CoeffMap& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::size_t support_size() const { return coeffs_.size(); }
  int max_mode() const;  // max of |m|, |n| over the support
  Cplx coeff(int m, int n) const;

  double max_abs() const;
  double l1_norm() const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Cplx s);

  // Drops amplitudes below rel * max_abs().  Called by every operation.
  void prune(double rel = prune_threshold());

  // Relative prune threshold shared by all element operations (default 1e-15).
  static double prune_threshold();
  static void set_prune_threshold(double rel);

private:
  void require_same_theta(const AlgebraElement& other) const;
  friend AlgebraElement operator*(const AlgebraElement&, const AlgebraElement&);

  double theta_;
  CoeffMap coeffs_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Cplx s, AlgebraElement a);
AlgebraElement operator*(AlgebraElement a, Cplx s);

// (U^m V^n)^* = e^{2 pi i theta mn} U^{-m} V^{-n}, amplitudes conjugated.
AlgebraElement adjoint(const AlgebraElement& a);

// phi_0 picks the (0,0) Fourier amplitude.
Cplx trace_phi0(const AlgebraElement& a);

// <a,b> = phi_0(b^* a).
Cplx inner_product(const AlgebraElement& a, const AlgebraElement& b);

// delta_1, delta_2 and the complex-structure derivations
// dbar = delta_1 + tau delta_2, dbar^* = delta_1 + conj(tau) delta_2.
// tau is only consulted for the latter two and must have Im(tau) > 0.
AlgebraElement derive(const AlgebraElement& a, Derivation which, Cplx tau = Cplx(0.0, 1.0));

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);
bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol);

}  // namespace nctsym
