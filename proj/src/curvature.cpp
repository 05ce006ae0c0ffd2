#include "nctsym/curvature.hpp"

#include <cmath>
#include <random>

namespace nctsym {

AlgebraElement CauchyRiemannFamily::alpha_at(Cplx w_point) const {
  return alpha0 + w_point * beta;
}

OperatorSymbol CauchyRiemannFamily::d_symbol(Cplx w_point) const {
  return OperatorSymbol::cauchy_riemann(ctx, alpha_at(w_point));
}

OperatorSymbol CauchyRiemannFamily::delta_symbol(Cplx w_point) const {
  OperatorSymbol d = d_symbol(w_point);
  return star_product(adjoint_symbol(d), d);
}

namespace {

AlgebraElement richardson_pair(const AlgebraElement& coarse, const AlgebraElement& fine,
                               double h_coarse, double h_fine) {
  // central differences carry O(h^2) error
  double r = (h_coarse * h_coarse) / (h_fine * h_fine);
  return (1.0 / (r - 1.0)) * (r * fine - coarse);
}

AlgebraElement wirtinger_combination(const ElementFunction& f, Cplx w, double h, double sign) {
  const Cplx ih(0.0, 1.0);
  AlgebraElement du = (1.0 / (2.0 * h)) * (f(w + h) - f(w - h));
  AlgebraElement dv = (1.0 / (2.0 * h)) * (f(w + ih * h) - f(w - ih * h));
  return 0.5 * (du + (sign * ih) * dv);
}

AlgebraElement wirtinger_impl(const ElementFunction& f, Cplx w, const std::vector<double>& steps,
                              double sign, double* drift) {
  if (steps.empty()) throw std::invalid_argument("wirtinger: need at least one step");
  AlgebraElement est = wirtinger_combination(f, w, steps[0], sign);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    AlgebraElement finer = wirtinger_combination(f, w, steps[i], sign);
    AlgebraElement extrap = richardson_pair(est, finer, steps[i - 1], steps[i]);
    if (drift) *drift = max_abs_diff(extrap, finer);
    est = extrap;
  }
  return est;
}

}  // namespace

AlgebraElement wirtinger_d(const ElementFunction& f, Cplx w, const std::vector<double>& steps,
                           double* drift) {
  return wirtinger_impl(f, w, steps, -1.0, drift);
}

AlgebraElement wirtinger_dbar(const ElementFunction& f, Cplx w, const std::vector<double>& steps,
                              double* drift) {
  return wirtinger_impl(f, w, steps, +1.0, drift);
}

AlgebraElement res_log_parametrix(const CauchyRiemannFamily& fam, Cplx w_point,
                                  ConvergenceInfo* conv) {
  OperatorSymbol d = fam.d_symbol(w_point);
  OperatorSymbol delta = star_product(adjoint_symbol(d), d);
  OperatorSymbol lg = log_symbol(delta, fam.depth);
  OperatorSymbol par = parametrix(d, fam.depth);
  OperatorSymbol prod = star_product(lg, par, std::min(lg.trunc(), par.trunc()));
  return res_density(prod, fam.quad, conv);
}

Lemma52Check lemma52_symbol(const CauchyRiemannFamily& fam, int npoints, unsigned seed) {
  if (fam.depth < 4)
    throw std::invalid_argument("lemma52_symbol: truncation depth must be at least 4");
  const Cplx tau = fam.ctx.tau;
  OperatorSymbol d = fam.d_symbol(fam.w);
  OperatorSymbol delta = star_product(adjoint_symbol(d), d);
  OperatorSymbol lg = log_symbol(delta, fam.depth);
  OperatorSymbol par = parametrix(d, fam.depth);
  OperatorSymbol prod = star_product(lg, par, std::min(lg.trunc(), par.trunc()));

  Lemma52Check out{prod.homogeneous_component(Cplx(-2.0), 0), Component{}, 0.0};

  // closed form: alpha part  g^{-1} l^{-1}(xi1 + tbar xi2) - Lam l^{-2},
  //              alpha* part g^{-1} l^{-1}(xi1 + t xi2)
  using CF = CoefficientFunction;
  const AlgebraElement alpha = fam.alpha_at(fam.w);
  const AlgebraElement alpha_star = adjoint(alpha);
  const CF ginv_linv = CF::g_power(tau, -1) * CF::ell(tau, -1);
  auto add = [&](int m, int n, const CF& f) {
    auto it = out.closed_form.find({m, n});
    if (it == out.closed_form.end())
      out.closed_form.emplace(std::make_pair(m, n), f);
    else
      it->second += f;
  };
  for (const auto& [mode, amp] : alpha.coeffs()) {
    CF f = ginv_linv *
           (CF::monomial(tau, amp, 1, 0) + CF::monomial(tau, std::conj(tau) * amp, 0, 1));
    f += CF::lambda(tau) * CF::ell(tau, -2) * (-amp);
    add(mode.first, mode.second, f);
  }
  for (const auto& [mode, amp] : alpha_star.coeffs()) {
    CF f = ginv_linv * (CF::monomial(tau, amp, 1, 0) + CF::monomial(tau, tau * amp, 0, 1));
    add(mode.first, mode.second, f);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < npoints; ++i) {
    double t = angle(rng);
    AlgebraElement got =
        evaluate_component(out.computed, fam.ctx.theta, std::cos(t), std::sin(t));
    AlgebraElement want =
        evaluate_component(out.closed_form, fam.ctx.theta, std::cos(t), std::sin(t));
    double scale = std::max(1e-30, want.max_abs());
    worst = std::max(worst, max_abs_diff(got, want) / scale);
  }
  out.max_rel_error = alpha.is_zero() ? 0.0 : worst;
  if (alpha.is_zero()) {
    // both sides must vanish identically
    for (double t : {0.3, 2.1, 4.0}) {
      AlgebraElement got =
          evaluate_component(out.computed, fam.ctx.theta, std::cos(t), std::sin(t));
      out.max_rel_error = std::max(out.max_rel_error, got.max_abs());
    }
  }
  return out;
}

ResVariation res_variation(const CauchyRiemannFamily& fam) {
  ResVariation out{AlgebraElement(fam.ctx.theta), AlgebraElement(fam.ctx.theta), 0.0};
  ElementFunction f = [&fam](Cplx w) { return res_log_parametrix(fam, w); };
  out.fd = wirtinger_dbar(f, fam.w, fam.fd_steps, &out.richardson_drift);
  out.closed = (1.0 / (kTwoPi * fam.ctx.tau.imag())) * adjoint(fam.beta);
  if (out.richardson_drift > 1e-6 * std::max(1.0, out.closed.max_abs()))
    throw ConvergenceError("res_variation: Richardson steps did not settle");
  return out;
}

JTermResult j_term(const CauchyRiemannFamily& fam, Cplx w_point, ConvergenceInfo* conv) {
  OperatorSymbol par = parametrix(fam.d_symbol(w_point), fam.depth);
  AlgebraElement fp = cutoff_integral(par, fam.quad, {}, conv);
  AlgebraElement res = res_log_parametrix(fam, w_point, conv);
  JTermResult out{fp - 0.5 * res, Cplx(0.0)};
  out.first_variation = -trace_phi0(fam.beta * out.j);
  return out;
}

CurvatureResult curvature(const CauchyRiemannFamily& fam, bool certify) {
  CurvatureResult out{};
  if (certify) {
    out.certificate = check_invertibility(fam.ctx, fam.alpha_at(fam.w));
    if (!out.certificate.certified)
      throw std::invalid_argument(
          "curvature: family not certified invertible at the base point");
  }
  ResVariation rv = res_variation(fam);
  out.richardson_drift = rv.richardson_drift;
  out.value_A = 0.5 * trace_phi0(fam.beta * rv.fd);
  out.value_B =
      trace_phi0(fam.beta * adjoint(fam.beta)) / (4.0 * kPi * fam.ctx.tau.imag());
  out.discrepancy = std::abs(out.value_A - out.value_B);
  return out;
}

Cplx remark54_normalization(const CauchyRiemannFamily& fam) {
  return fam.ctx.tau.imag() *
         trace_phi0(fam.beta * adjoint(fam.beta)) / (4.0 * kPi * fam.ctx.tau.imag());
}

}  // namespace nctsym
