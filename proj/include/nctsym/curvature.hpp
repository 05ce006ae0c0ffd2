#pragma once

// The determinant-line-bundle pipeline: holomorphic families
// D_w = dbar + alpha_0 + w beta of Cauchy-Riemann operators, the residue
// density res(log Delta D^{-1}), its antiholomorphic variation, the J term,
// and the curvature identity
//   delta_wbar delta_w zeta'(0) = (1/2) phi_0(delta_w D delta_wbar res(...))
//                               = 1/(4 pi Im tau) phi_0(delta_w D (delta_w D)^*).
// Variations are central finite differences in w with Richardson
// extrapolation; Wirtinger convention delta_w = (d_u - i d_v)/2,
// delta_wbar = (d_u + i d_v)/2.

#include <functional>

#include "nctsym/lattice.hpp"
#include "nctsym/trace.hpp"

namespace nctsym {

struct CauchyRiemannFamily {
  SymbolContext ctx;
  AlgebraElement alpha0;
  AlgebraElement beta;
  Cplx w{0.0};
  int depth = kDefaultDepth;
  QuadratureConfig quad;
  std::vector<double> fd_steps{1e-3, 1e-4};

  AlgebraElement alpha_at(Cplx w_point) const;          // alpha0 + w beta
  OperatorSymbol d_symbol(Cplx w_point) const;          // l + alpha_w
  OperatorSymbol delta_symbol(Cplx w_point) const;      // D* star D
};

// Central-difference Wirtinger derivatives of an element-valued function,
// Richardson-extrapolated over the configured steps.  drift (when given)
// receives the difference between the two step estimates.
using ElementFunction = std::function<AlgebraElement(Cplx)>;
AlgebraElement wirtinger_d(const ElementFunction& f, Cplx w, const std::vector<double>& steps,
                           double* drift = nullptr);
AlgebraElement wirtinger_dbar(const ElementFunction& f, Cplx w, const std::vector<double>& steps,
                              double* drift = nullptr);

// res(log Delta_w star D_w^{-1}) as an element of the algebra.
AlgebraElement res_log_parametrix(const CauchyRiemannFamily& fam, Cplx w_point,
                                  ConvergenceInfo* conv = nullptr);

struct Lemma52Check {
  Component computed;      // sigma_{-2,0}(log Delta star D^{-1}) from the calculus
  Component closed_form;   // g^{-1} l^{-1} [(a+a*) xi1 + (tbar a + t a*) xi2] - Lam l^{-2} a
  double max_rel_error;    // over sampled points on |xi| = 1
};

Lemma52Check lemma52_symbol(const CauchyRiemannFamily& fam, int npoints = 32,
                            unsigned seed = 2026);

struct ResVariation {
  AlgebraElement fd;       // delta_wbar res(log Delta D^{-1}) by differences
  AlgebraElement closed;   // beta^* / (2 pi Im tau)
  double richardson_drift;
};

ResVariation res_variation(const CauchyRiemannFamily& fam);

struct JTermResult {
  AlgebraElement j;        // cut-off integral of sigma(D^{-1}) minus half the residue
  Cplx first_variation;    // -phi_0(beta J)
};

JTermResult j_term(const CauchyRiemannFamily& fam, Cplx w_point,
                   ConvergenceInfo* conv = nullptr);

struct CurvatureResult {
  Cplx value_A;            // Lemma route: (1/2) phi_0(beta * fd residue variation)
  Cplx value_B;            // closed form: phi_0(beta beta^*) / (4 pi Im tau)
  double discrepancy;      // |A - B|
  double richardson_drift;
  InvertibilityCertificate certificate;
};

CurvatureResult curvature(const CauchyRiemannFamily& fam, bool certify = true);

// Remark-style classical normalization: Im(tau) times value B.
Cplx remark54_normalization(const CauchyRiemannFamily& fam);

}  // namespace nctsym
