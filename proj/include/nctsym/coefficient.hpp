#pragma once

// Closed-class scalar coefficient functions of xi in R^2.  Every value the
// symbol calculus produces is a finite sum of terms
//
//   c(z) * xi1^a xi2^b * l^el * lb^elb * rho^er * Lam^pLam * L0^pL0
//        * g^gs * (g^z if the z flag is set)
//
// over the factor basis
//   l   = xi1 + tau xi2,          lb  = xi1 + conj(tau) xi2,
//   rho = xi1^2 + xi2^2,          g   = l * lb,
//   Lam = log(g / rho),           L0  = log|xi|,
// with c(z) a polynomial in the formal power parameter z and gs a fixed
// numeric extra exponent on g.  The class is closed under +, *, d/dxi_i,
// d/dz and substitution of numeric z.

#include <optional>
#include <vector>

#include "nctsym/common.hpp"

namespace nctsym {

// Polynomial in z, coefficients in C; coeffs[i] multiplies z^i.
using ZPoly = std::vector<Cplx>;

ZPoly zpoly_add(const ZPoly& p, const ZPoly& q);
ZPoly zpoly_mul(const ZPoly& p, const ZPoly& q);
ZPoly zpoly_scale(const ZPoly& p, Cplx s);
ZPoly zpoly_derivative(const ZPoly& p);
ZPoly zpoly_shift(const ZPoly& p, int s);  // p(z) -> p(z + s)
Cplx zpoly_eval(const ZPoly& p, Cplx z);
double zpoly_max_abs(const ZPoly& p);

struct CoeffTerm {
  ZPoly zc{Cplx(1.0)};
  int a = 0, b = 0;        // monomial exponents, >= 0
  int el = 0, elb = 0;     // exponents of l and lb
  int er = 0;              // exponent of rho
  int pLam = 0, pL0 = 0;   // log powers, >= 0
  bool zflag = false;      // extra factor g^z
  Cplx gs{0.0};            // extra numeric exponent on g

  // Homogeneity degree contributed by everything except the symbolic g^z.
  Cplx degree_no_z() const {
    return Cplx(a + b + el + elb + 2 * er) + 2.0 * gs;
  }
};

class CoefficientFunction {
public:
  explicit CoefficientFunction(Cplx tau) : tau_(tau) { require_upper(tau); }
  CoefficientFunction(Cplx tau, std::vector<CoeffTerm> terms);

  static CoefficientFunction zero(Cplx tau) { return CoefficientFunction(tau); }
  static CoefficientFunction constant(Cplx tau, Cplx c);
  static CoefficientFunction one(Cplx tau) { return constant(tau, 1.0); }
  static CoefficientFunction monomial(Cplx tau, Cplx c, int a, int b);
  static CoefficientFunction ell(Cplx tau, int power = 1);
  static CoefficientFunction ellbar(Cplx tau, int power = 1);
  static CoefficientFunction rho(Cplx tau, int power = 1);
  static CoefficientFunction g_power(Cplx tau, int power);
  static CoefficientFunction lambda(Cplx tau, int power = 1);   // Lam^power
  static CoefficientFunction log_norm(Cplx tau, int power = 1); // L0^power
  static CoefficientFunction from_term(Cplx tau, CoeffTerm t);

  Cplx tau() const { return tau_; }
  const std::vector<CoeffTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool has_z() const;
  bool has_log() const;          // any pLam or pL0
  int max_pL0() const;
  double max_abs_coeff() const;

  // True when every term is a plain polynomial in (xi1, xi2): nonnegative
  // factor exponents, no logs, no z, no numeric g power.
  bool is_polynomial() const;

  CoefficientFunction& operator+=(const CoefficientFunction& rhs);
  CoefficientFunction& operator-=(const CoefficientFunction& rhs);

  // Exact partial derivative in xi_axis (axis is 1 or 2).
  CoefficientFunction partial(int axis) const;

  // Symbolic d/dz.  g^z contributes log g = Lam + 2 L0.
  CoefficientFunction dz() const;
  // d/dz followed by z := 0; the result is z-free.  Throws if z-free already.
  CoefficientFunction dz_at_zero() const;

  // z := z0.  The integer overload stays exactly in the integer-exponent
  // class; the complex overload folds z0 into the numeric g exponent.
  CoefficientFunction substitute_z(int z0) const;
  CoefficientFunction substitute_z(Cplx z0) const;
  // z -> z + s, exact.
  CoefficientFunction shift_z(int s) const;

  // Complex conjugate of the function of real xi (l <-> lb, coefficients
  // conjugated).  Only defined for z-free inputs.
  CoefficientFunction conj_fn() const;

  // Removes all L0 factors (used when splitting a log-polyhomogeneous
  // component into its homogeneous coefficient and the explicit log power).
  CoefficientFunction strip_L0() const;

  Cplx evaluate(double xi1, double xi2, std::optional<Cplx> z = std::nullopt) const;

  // Split the terms by their L0 power.  Keys are pL0 values.
  std::vector<std::pair<int, CoefficientFunction>> split_by_L0() const;

private:
  static void require_upper(Cplx tau);
  void normalize();

  Cplx tau_;
  std::vector<CoeffTerm> terms_;
};

CoefficientFunction operator+(CoefficientFunction f, const CoefficientFunction& g);
CoefficientFunction operator-(CoefficientFunction f, const CoefficientFunction& g);
CoefficientFunction operator*(const CoefficientFunction& f, const CoefficientFunction& g);
CoefficientFunction operator*(Cplx s, CoefficientFunction f);
CoefficientFunction operator*(CoefficientFunction f, Cplx s);

}  // namespace nctsym
