#include "nctsym/trace.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nctsym {

namespace {

constexpr double kPoleTol = 1e-6;
constexpr double kExactMinus2 = 1e-12;

AlgebraElement circle_trapezoid_component(const Component& comp, const SymbolContext& ctx,
                                          int nodes) {
  AlgebraElement acc(ctx.theta);
  for (int i = 0; i < nodes; ++i) {
    double t = kTwoPi * i / nodes;
    double x = std::cos(t), y = std::sin(t);
    for (const auto& [mode, f] : comp) {
      Cplx v = f.evaluate(x, y);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::domain_error("circle integrand is singular on |xi| = 1");
      acc += AlgebraElement::monomial(ctx.theta, mode.first, mode.second, v);
    }
  }
  return (1.0 / (kTwoPi * double(nodes))) * acc;
}

// chi for given transition radii
double chi_at(double r, double a0, double a1) { return chi_between(r, a0, a1); }

}  // namespace

AlgebraElement circle_integral_component(const Component& comp, const SymbolContext& ctx,
                                         const QuadratureConfig& cfg, ConvergenceInfo* conv) {
  cfg.validate();
  if (comp.empty()) return AlgebraElement::zero(ctx.theta);
  // doubling ladder: climb until the drift certifies convergence, with
  // cfg.circle_nodes as the budget cap
  int nodes = std::min(128, cfg.circle_nodes);
  AlgebraElement coarse = circle_trapezoid_component(comp, ctx, nodes);
  while (true) {
    AlgebraElement fine = circle_trapezoid_component(comp, ctx, 2 * nodes);
    double drift = max_abs_diff(coarse, fine) / std::max(1.0, fine.max_abs());
    if (drift <= cfg.tol) {
      if (conv) conv->absorb_circle(drift, 2 * nodes);
      return fine;
    }
    if (2 * nodes >= 2 * cfg.circle_nodes) {
      if (conv) conv->absorb_circle(drift, 2 * nodes);
      throw ConvergenceError("circle integral did not converge");
    }
    nodes *= 2;
    coarse = std::move(fine);
  }
}

AlgebraElement res_density(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                           ConvergenceInfo* conv) {
  const Cplx joff = sym.order() + 2.0;
  if (std::abs(joff.imag()) > 1e-9 || !near_integer(joff.real()) || joff.real() < -0.5)
    return AlgebraElement::zero(sym.context().theta);  // non-integer order: no residue
  const int j = int(std::lround(joff.real()));
  if (j >= sym.trunc())
    throw std::domain_error("res_density: truncation too shallow for the (-2,0) component");
  Component c = sym.homogeneous_component(Cplx(-2.0), 0);
  return circle_integral_component(c, sym.context(), cfg, conv);
}

Cplx wodzicki_residue(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                      ConvergenceInfo* conv) {
  return trace_phi0(res_density(sym, cfg, conv));
}

namespace {

// int_0^1 chi(r) r^{d+1} log^l r dr for the bump with radii (a0, a1):
// numeric on the transition [a0, a1], exact antiderivative on [a1, 1].
Cplx rad01(Cplx d, int l, double a0, double a1, const QuadratureConfig& cfg,
           ConvergenceInfo* conv) {
  auto f = [&](double r) {
    return chi_at(r, a0, a1) * std::exp((d + 1.0) * std::log(r)) * ipow(Cplx(std::log(r)), l);
  };
  Cplx v = gl_integrate_checked(f, a0, a1, cfg.radial_nodes, cfg.tol, conv, "chi transition");
  if (a1 < 1.0) v += radial_antiderivative(d, l, 1.0) - radial_antiderivative(d, l, a1);
  return v;
}

// int (chi_rep - chi_dec)(r) r^{d+1} log^l r dr over the union of supports.
Cplx rad_diff(Cplx d, int l, double rep0, double rep1, double dec0, double dec1,
              const QuadratureConfig& cfg, ConvergenceInfo* conv) {
  std::vector<double> brk{rep0, rep1, dec0, dec1};
  std::sort(brk.begin(), brk.end());
  Cplx acc(0.0);
  for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
    if (brk[i + 1] - brk[i] < 1e-14) continue;
    auto f = [&](double r) {
      return (chi_at(r, rep0, rep1) - chi_at(r, dec0, dec1)) *
             std::exp((d + 1.0) * std::log(r)) * ipow(Cplx(std::log(r)), l);
    };
    acc += gl_integrate_checked(f, brk[i], brk[i + 1], cfg.radial_nodes, cfg.tol, conv,
                                "cut-off difference");
  }
  return acc;
}

}  // namespace

AlgebraElement cutoff_integral(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                               const CutoffDecomposition& dec, ConvergenceInfo* conv,
                               const RadialRemainder* remainder) {
  cfg.validate();
  const SymbolContext& ctx = sym.context();
  const double rep0 = cfg.r0, rep1 = cfg.r1;
  const double dec0 = dec.r0.value_or(rep0), dec1 = dec.r1.value_or(rep1);
  if (!(dec0 > 0.0 && dec0 < dec1 && dec1 <= 1.0))
    throw std::invalid_argument("cutoff_integral: invalid decomposition cut-off");
  const int ndec = dec.depth.value_or(sym.max_offset() + 1);
  const bool same_chi = dec0 == rep0 && dec1 == rep1;

  AlgebraElement out(ctx.theta);
  for (const auto& [key, comp] : sym.components()) {
    const auto [j, l] = key;
    Component stripped;
    for (const auto& [mode, f] : comp) stripped.emplace(mode, f.strip_L0());
    AlgebraElement s = circle_integral_component(stripped, ctx, cfg, conv);
    if (s.is_zero()) continue;
    const Cplx d = sym.order() - Cplx(double(j));
    const bool exact_log_degree = std::abs(d + 2.0) <= kExactMinus2;
    Cplx w;
    if (j < ndec) {
      if (!exact_log_degree && std::abs(d + 2.0) < kPoleTol)
        throw PoleError("cutoff_integral: component degree within tolerance of the pole at -2");
      w = radial_finite_part_constant(d, l) + rad01(d, l, dec0, dec1, cfg, conv);
      if (!same_chi) w += rad_diff(d, l, rep0, rep1, dec0, dec1, cfg, conv);
    } else {
      if (d.real() >= -2.0 - 1e-9)
        throw ConvergenceError(
            "cutoff_integral: remainder component is not integrable; increase the "
            "decomposition depth");
      w = radial_finite_part_constant(d, l) + rad01(d, l, rep0, rep1, cfg, conv);
    }
    out += w * s;
  }
  if (remainder) {
    // piecewise: the integrand has C^2 breaks at the cut-off radii
    auto f = [&](double r) { return r * remainder->fn(r); };
    Cplx v = gl_integrate_checked(f, 0.0, rep0, cfg.radial_nodes, cfg.tol, conv, "remainder core");
    v += gl_integrate_checked(f, rep0, rep1, cfg.radial_nodes, cfg.tol, conv, "remainder transition");
    v += gl_integrate_checked(f, rep1, 2.0 * rep1, cfg.radial_nodes, cfg.tol, conv, "remainder shell");
    v += improper_radial_integral(f, 2.0 * rep1, cfg.radial_nodes, cfg.tol, conv);
    out += (v / kTwoPi) * remainder->factor;
  }
  return out;
}

Cplx canonical_trace(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                     const CutoffDecomposition& dec, ConvergenceInfo* conv,
                     const RadialRemainder* remainder) {
  return trace_phi0(cutoff_integral(sym, cfg, dec, conv, remainder));
}

Cplx zeta_value(const OperatorSymbol& a, const OperatorSymbol& delta, Cplx z,
                const QuadratureConfig& cfg, ConvergenceInfo* conv) {
  return zeta_value(a, complex_power(delta, cfg.depth), z, cfg, conv);
}

Cplx zeta_value(const OperatorSymbol& a, const ParametricSymbol& power, Cplx z,
                const QuadratureConfig& cfg, ConvergenceInfo* conv) {
  // pole set of the family: alpha(z) - j + 2 = 0 for some component offset
  const Cplx family_order = a.order() - 2.0 * z;
  for (int j = 0; j <= a.max_offset() + power.trunc(); ++j)
    if (std::abs(family_order - Cplx(double(j)) + 2.0) < kPoleTol)
      throw PoleError("zeta_value: z within tolerance of a pole of TR(A Q^{-z})");
  OperatorSymbol qz = power.substitute(-z);
  const int depth = std::min({a.is_exact() ? power.trunc() : a.trunc(), power.trunc()});
  OperatorSymbol prod = star_product(a, qz, depth);
  return canonical_trace(prod, cfg, {}, conv);
}

Cplx kernel_trace(const OperatorSymbol& sym, const KernelInfo& kernel,
                  const QuadratureConfig& cfg) {
  Cplx acc(0.0);
  for (const auto& [m, n] : kernel.modes) {
    double weight = 1.0;
    if (!sym.is_exact()) weight = chi_cutoff(std::hypot(double(m), double(n)), cfg);
    if (weight == 0.0) continue;
    acc += weight * trace_phi0(sym.evaluate(double(m), double(n)));
  }
  return acc;
}

LaurentExpansion laurent_at_zero(const OperatorSymbol& a, const OperatorSymbol& delta, int K,
                                 const QuadratureConfig& cfg, const KernelInfo& kernel,
                                 ConvergenceInfo* conv) {
  const int depth = cfg.depth;
  OperatorSymbol lg = log_symbol(delta, depth);

  LaurentExpansion out;
  out.a_minus1 = 0.5 * wodzicki_residue(a, cfg, conv);

  // powers A, A log Q, A (log Q)^2, ... computed once
  std::vector<OperatorSymbol> a_logk{a};
  for (int k = 1; k <= K + 1; ++k)
    a_logk.push_back(star_product(a_logk.back(), lg, std::min(depth, lg.trunc())));

  double factk = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) factk *= k;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    Cplx fpart = canonical_trace(a_logk[std::size_t(k)], cfg, {}, conv);
    Cplx rpart = wodzicki_residue(a_logk[std::size_t(k + 1)], cfg, conv);
    Cplx kpart = kernel_trace(a_logk[std::size_t(k)], kernel, cfg);
    out.a.push_back(sign / factk * (fpart - rpart / (2.0 * (k + 1)) - kpart));
  }
  return out;
}

AlgebraElement ball_integral(const OperatorSymbol& sym, double R, const QuadratureConfig& cfg,
                             ConvergenceInfo* conv) {
  if (R < cfg.r1)
    throw std::invalid_argument("ball_integral: radius must reach past the cut-off transition");
  const SymbolContext& ctx = sym.context();
  AlgebraElement out(ctx.theta);
  for (const auto& [key, comp] : sym.components()) {
    const auto [j, l] = key;
    Component stripped;
    for (const auto& [mode, f] : comp) stripped.emplace(mode, f.strip_L0());
    AlgebraElement s = circle_integral_component(stripped, ctx, cfg, conv);
    if (s.is_zero()) continue;
    const Cplx d = sym.order() - Cplx(double(j));
    auto f = [&](double r) {
      return chi_cutoff(r, cfg) * std::exp((d + 1.0) * std::log(r)) *
             ipow(Cplx(std::log(r)), l);
    };
    Cplx w = gl_integrate_checked(f, cfg.r0, cfg.r1, cfg.radial_nodes, cfg.tol, conv,
                                  "ball transition");
    w += radial_antiderivative(d, l, R) - radial_antiderivative(d, l, cfg.r1);
    out += w * s;
  }
  return out;
}

RSweepFit r_sweep_fit(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                      const std::vector<double>& radii) {
  // expansion basis from the stored components: R^{d+2} log^m R (m <= l),
  // log^m R (m <= l+1 at d == -2) and the constant
  std::vector<std::function<Cplx(double)>> basis;
  std::vector<std::pair<Cplx, int>> seen;
  basis.push_back([](double) { return Cplx(1.0); });
  int log_index = -1;
  for (const auto& [key, comp] : sym.components()) {
    (void)comp;
    const auto [j, l] = key;
    const Cplx d = sym.order() - Cplx(double(j));
    if (std::abs(d + 2.0) <= kExactMinus2) {
      for (int m = 1; m <= l + 1; ++m) {
        if (std::find(seen.begin(), seen.end(), std::make_pair(Cplx(-2.0), m)) != seen.end())
          continue;
        seen.emplace_back(Cplx(-2.0), m);
        if (m == 1 && log_index < 0) log_index = int(basis.size());
        basis.push_back([m](double R) { return Cplx(std::pow(std::log(R), m)); });
      }
    } else {
      for (int m = 0; m <= l; ++m) {
        if (std::find(seen.begin(), seen.end(), std::make_pair(d, m)) != seen.end()) continue;
        seen.emplace_back(d, m);
        basis.push_back([d, m](double R) {
          return std::exp((d + 2.0) * std::log(R)) * std::pow(std::log(R), m);
        });
      }
    }
  }

  const int rows = int(radii.size()), cols = int(basis.size());
  if (rows < cols)
    throw std::invalid_argument("r_sweep_fit: need at least as many radii as basis terms");
  Eigen::MatrixXcd Mc(rows, cols);
  Eigen::VectorXcd rc(rows);
  for (int i = 0; i < rows; ++i) {
    AlgebraElement v = ball_integral(sym, radii[std::size_t(i)], cfg);
    rc(i) = trace_phi0(v);
    for (int c = 0; c < cols; ++c) Mc(i, c) = basis[std::size_t(c)](radii[std::size_t(i)]);
  }
  Eigen::VectorXcd sol = Mc.colPivHouseholderQr().solve(rc);
  RSweepFit fit;
  fit.constant = sol(0);
  fit.log_coeff = log_index >= 0 ? sol(log_index) : Cplx(0.0);
  fit.residual = (Mc * sol - rc).cwiseAbs().maxCoeff();
  return fit;
}

RadialPowerFixture make_radial_power_fixture(const SymbolContext& ctx, double c, double s,
                                             const QuadratureConfig& cfg) {
  if (ctx.tau != Cplx(0.0, 1.0))
    throw std::invalid_argument("radial power fixture requires tau = i (g == rho)");
  if (!(c > 0.0 && s > 1.0))
    throw std::invalid_argument("radial power fixture requires c > 0, s > 1");
  const int N = cfg.depth;

  RadialPowerFixture fx{OperatorSymbol(ctx, -2.0 * s, 2 * N + 2),
                        RadialRemainder{nullptr, AlgebraElement::unit(ctx.theta)},
                        {},
                        Cplx(std::pow(c, 1.0 - s) / (4.0 * kPi * (s - 1.0)))};

  // (c + rho)^{-s} = sum_j binom(-s, j) c^j rho^{-s-j} for rho > c
  std::vector<double> coeff;
  double binom = 1.0;
  for (int j = 0; j <= N; ++j) {
    if (j > 0) binom *= (-s - (j - 1)) / double(j);
    coeff.push_back(binom * std::pow(c, double(j)));
    CoeffTerm t;
    t.zc = {Cplx(coeff.back())};
    t.gs = Cplx(-s - double(j));
    fx.expansion.deposit(2 * j, 0, 0, CoefficientFunction::from_term(ctx.tau, t));
  }

  fx.radial = [c, s](double r) { return std::pow(c + r * r, -s); };
  const double rr0 = cfg.r0, rr1 = cfg.r1;
  fx.remainder.fn = [c, s, coeff, rr0, rr1](double r) {
    double full = std::pow(c + r * r, -s);
    double chi = chi_between(r, rr0, rr1);
    if (chi == 0.0) return Cplx(full);
    double expansion = 0.0;
    for (std::size_t j = 0; j < coeff.size(); ++j)
      expansion += coeff[j] * std::pow(r, -2.0 * (s + double(j)));
    return Cplx(full - chi * expansion);
  };
  return fx;
}

}  // namespace nctsym
