// End-to-end acceptance suite.  Runs every top-level criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion; exits nonzero if
// any fails.  Fixed seeds throughout; target runtime well under ten minutes.

#include <Eigen/Dense>
#include <cstdio>
#include <random>
#include <sstream>

#include "nctsym/curvature.hpp"
#include "nctsym/json_io.hpp"
#include "nctsym/lattice.hpp"

using namespace nctsym;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s  (%s)\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double x) { return format_double(x); }

AlgebraElement rnd_element(std::mt19937_64& rng, double theta, int max_mode, double amp,
                           int nterms) {
  std::uniform_int_distribution<int> mode(-max_mode, max_mode);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AlgebraElement a(theta);
  for (int i = 0; i < nterms; ++i)
    a += AlgebraElement::monomial(theta, mode(rng), mode(rng), amp * Cplx(u(rng), u(rng)));
  return a;
}

AlgebraElement scenario_alpha0(double theta) {
  return AlgebraElement::unit(theta, Cplx(0.42, 0.13)) +
         AlgebraElement::monomial(theta, 1, 0, Cplx(0.06, -0.02)) +
         AlgebraElement::monomial(theta, 0, 1, Cplx(0.04, 0.02));
}

OperatorSymbol delta_of(const SymbolContext& ctx, const AlgebraElement& alpha) {
  OperatorSymbol d = OperatorSymbol::cauchy_riemann(ctx, alpha);
  return star_product(adjoint_symbol(d), d);
}

const double kTheta = kDefaultTheta;

// ------------------------------------------------------------ criteria 1+3

void criteria_curvature_and_res_variation() {
  const std::vector<Cplx> taus{Cplx(0.0, 1.0), Cplx(0.3, 1.2)};
  double worst_curv = 0.0, worst_resvar = 0.0, worst_pin = 1e9;
  bool all_certified = true;
  for (const Cplx& tau : taus) {
    SymbolContext ctx{kTheta, tau};
    std::vector<AlgebraElement> betas{
        AlgebraElement::monomial(kTheta, 1, 0), AlgebraElement::monomial(kTheta, 0, 1),
        AlgebraElement::monomial(kTheta, 1, 0) + AlgebraElement::monomial(kTheta, 0, 1)};
    for (const AlgebraElement& beta : betas) {
      CauchyRiemannFamily fam;
      fam.ctx = ctx;
      fam.alpha0 = scenario_alpha0(kTheta);
      fam.beta = beta;
      fam.w = Cplx(0.05, -0.02);
      fam.depth = 4;
      InvertibilityCertificate cert = check_invertibility(ctx, fam.alpha_at(fam.w));
      all_certified = all_certified && cert.certified;

      ResVariation rv = res_variation(fam);
      double rel = max_abs_diff(rv.fd, rv.closed) / std::max(1e-30, rv.closed.max_abs());
      worst_resvar = std::max(worst_resvar, rel);

      Cplx value_A = 0.5 * trace_phi0(fam.beta * rv.fd);
      Cplx value_B = trace_phi0(fam.beta * adjoint(fam.beta)) / (4.0 * kPi * tau.imag());
      worst_curv = std::max(worst_curv, std::abs(value_A - value_B) / std::abs(value_B));

      if (tau == Cplx(0.0, 1.0) && beta.support_size() == 1 && beta.coeff(1, 0) == Cplx(1.0))
        worst_pin = std::abs(value_B - 1.0 / (4.0 * kPi));
    }
  }
  report(1, "curvature theorem: variational route vs closed form",
         all_certified && worst_curv <= 1e-5 && worst_pin <= 1e-12,
         "6 (tau, beta) combinations, max rel deviation " + fmt(worst_curv) +
             ", 1/(4 pi) pin deviation " + fmt(worst_pin));
  report(3, "residue variation equals beta^*/(2 pi Im tau)", worst_resvar <= 1e-6,
         "coefficient-wise relative error " + fmt(worst_resvar) + " after Richardson");
}

// -------------------------------------------------------------- criterion 2

void criterion_lemma52_symbol() {
  SymbolContext ctx{kTheta, Cplx(0.3, 1.2)};
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    CauchyRiemannFamily fam;
    fam.ctx = ctx;
    fam.alpha0 = rnd_element(rng, kTheta, 1, 0.6, 4);
    fam.beta = AlgebraElement::zero(kTheta);
    fam.w = Cplx(0.0);
    fam.depth = 4;
    Lemma52Check chk = lemma52_symbol(fam, 32, 1000 + unsigned(trial));
    worst = std::max(worst, chk.max_rel_error);
  }
  report(2, "lemma52 symbol identity at 32 circle points x 5 random alpha", worst <= 1e-8,
         "max relative error " + fmt(worst));
}

// -------------------------------------------------------------- criterion 4

void criterion_circle_pin() {
  double worst = 0.0;
  QuadratureConfig cfg;
  for (Cplx tau : {Cplx(0.0, 1.0), Cplx(0.3, 1.2), Cplx(-0.4, 0.8), Cplx(1.1, 2.3),
                   Cplx(0.25, 0.35)}) {
    SymbolContext ctx{kTheta, tau};
    Component ginv{{{0, 0}, CoefficientFunction::g_power(tau, -1)}};
    Cplx v = trace_phi0(circle_integral_component(ginv, ctx, cfg));
    worst = std::max(worst, std::abs(v - 1.0 / (kTwoPi * tau.imag())));
  }
  report(4, "circle integral of g^{-1} = 1/(2 pi Im tau) for 5 tau", worst <= 1e-10,
         "max deviation " + fmt(worst));
}

// -------------------------------------------------------------- criterion 5

void criterion_trace_property() {
  SymbolContext ctx{kTheta, Cplx(0.3, 1.2)};
  QuadratureConfig cfg;
  OperatorSymbol delta = delta_of(ctx, AlgebraElement::unit(kTheta, 0.3));
  ParametricSymbol power = complex_power(delta, cfg.depth);
  OperatorSymbol qz0 = power.substitute(Cplx(-0.3));
  OperatorSymbol qz1 = power.substitute(Cplx(-1.1));
  std::mt19937_64 rng(7);
  double worst = 0.0;
  double min_value = 1e30;
  for (int pair = 0; pair < 10; ++pair) {
    AlgebraElement a = AlgebraElement::unit(kTheta) + rnd_element(rng, kTheta, 1, 2e-5, 3);
    AlgebraElement b = AlgebraElement::unit(kTheta) + rnd_element(rng, kTheta, 1, 2e-5, 3);
    OperatorSymbol A = star_product(OperatorSymbol::multiplication(ctx, a), qz0, qz0.trunc());
    OperatorSymbol B = star_product(OperatorSymbol::multiplication(ctx, b), qz1, qz1.trunc());
    const int depth = std::min(A.trunc(), B.trunc());
    Cplx tab = canonical_trace(star_product(A, B, depth), cfg, {});
    Cplx tba = canonical_trace(star_product(B, A, depth), cfg, {});
    min_value = std::min(min_value, std::abs(tab));
    worst = std::max(worst, std::abs(tab - tba) / std::max(1.0, std::abs(tab)));
  }
  report(5, "trace property TR(AB) = TR(BA), 10 pairs at total order -2.8",
         worst <= 1e-8 && min_value > 0.01,
         "max |TR(AB)-TR(BA)|/max(1,|TR|) = " + fmt(worst) + ", min |TR| = " + fmt(min_value));
}

// -------------------------------------------------------------- criterion 6

void criterion_cutoff_well_defined() {
  SymbolContext ctx{kTheta, Cplx(0.3, 1.2)};
  QuadratureConfig cfg;
  cfg.depth = 8;
  std::mt19937_64 rng(11);
  AlgebraElement alpha = scenario_alpha0(kTheta) + rnd_element(rng, kTheta, 1, 0.05, 2);
  OperatorSymbol delta = delta_of(ctx, alpha);
  OperatorSymbol par = parametrix(delta, 8);
  OperatorSymbol logpar = star_product(log_symbol(delta, 6), parametrix(delta, 7), 7);

  double worst = 0.0;
  for (const OperatorSymbol* sym : {&par, &logpar}) {
    AlgebraElement base = cutoff_integral(*sym, cfg, {});
    CutoffDecomposition chi2;
    chi2.r0 = 0.25;
    chi2.r1 = 0.75;
    worst = std::max(worst, max_abs_diff(base, cutoff_integral(*sym, cfg, chi2)));
    CutoffDecomposition shallower;
    shallower.depth = sym->max_offset() - 1;
    worst = std::max(worst, max_abs_diff(base, cutoff_integral(*sym, cfg, shallower)));
  }

  QuadratureConfig fxcfg;
  fxcfg.r0 = 0.8;
  fxcfg.r1 = 1.0;
  fxcfg.depth = 2;
  SymbolContext ctau_i{kTheta, Cplx(0.0, 1.0)};
  RadialPowerFixture fx = make_radial_power_fixture(ctau_i, 1.0, 1.75, fxcfg);
  Cplx c = trace_phi0(cutoff_integral(fx.expansion, fxcfg, {}, nullptr, &fx.remainder));
  double pin = std::abs(c - 1.0 / (3.0 * kPi));

  report(6, "cut-off integral: chi- and depth-independence + (1+rho)^{-1.75} = 1/(3 pi)",
         worst <= 1e-8 && pin <= 1e-8,
         "max drift " + fmt(worst) + ", closed-form deviation " + fmt(pin));
}

// -------------------------------------------------------------- criterion 7

Cplx fitted_pole_coefficient(const OperatorSymbol& A, const ParametricSymbol& power,
                             const QuadratureConfig& cfg) {
  // eight samples, basis {1/z, 1, z, z^2, z^3, z^4}
  std::vector<double> zs{-0.12, -0.09, -0.06, -0.03, 0.03, 0.06, 0.09, 0.12};
  Eigen::MatrixXcd M(8, 6);
  Eigen::VectorXcd rhs(8);
  for (int i = 0; i < 8; ++i) {
    double z = zs[std::size_t(i)];
    M(i, 0) = 1.0 / z;
    for (int p = 0; p < 5; ++p) M(i, p + 1) = std::pow(z, p);
    rhs(i) = zeta_value(A, power, Cplx(z), cfg);
  }
  Eigen::VectorXcd sol = M.colPivHouseholderQr().solve(rhs);
  return sol(0);
}

void criterion_pole_structure() {
  SymbolContext ctx{kTheta, Cplx(0.3, 1.2)};
  QuadratureConfig cfg;
  AlgebraElement alpha = scenario_alpha0(kTheta);
  OperatorSymbol delta = delta_of(ctx, alpha);
  ParametricSymbol power = complex_power(delta, cfg.depth);

  OperatorSymbol A = parametrix(delta, cfg.depth);
  Cplx fitted = fitted_pole_coefficient(A, power, cfg);
  Cplx want = 0.5 * wodzicki_residue(A, cfg);
  double dev_par = std::abs(fitted - want);

  Cplx fitted_diff = fitted_pole_coefficient(delta, power, cfg);
  double dev_diff = std::abs(fitted_diff);

  report(7, "pole fit: a_{-1} = (1/2) Res(A); differential A is regular",
         dev_par <= 1e-6 && dev_diff <= 1e-9,
         "parametrix deviation " + fmt(dev_par) + ", differential |a_{-1}| = " + fmt(dev_diff));
}

// -------------------------------------------------------------- criterion 8

void criterion_laurent_consistency() {
  SymbolContext ctx{kTheta, Cplx(0.0, 1.0)};
  QuadratureConfig cfg;
  AlgebraElement alpha = AlgebraElement::unit(kTheta, Cplx(0.45, 0.15)) +
                         AlgebraElement::monomial(kTheta, 1, 0, Cplx(1e-3, 5e-4));
  OperatorSymbol delta = delta_of(ctx, alpha);
  InvertibilityCertificate cert = check_invertibility(ctx, alpha);
  ParametricSymbol power = complex_power(delta, cfg.depth);
  OperatorSymbol A = parametrix(delta, cfg.depth);

  LaurentExpansion le = laurent_at_zero(A, delta, 3, cfg);

  // fit {1/z, 1, z} after removing the expansion's own z^2 and z^3 terms
  std::vector<double> zs{-0.1, -0.05, 0.05, 0.1};
  Eigen::MatrixXcd M(4, 3);
  Eigen::VectorXcd rhs(4);
  for (int i = 0; i < 4; ++i) {
    double z = zs[std::size_t(i)];
    M(i, 0) = 1.0 / z;
    M(i, 1) = 1.0;
    M(i, 2) = z;
    rhs(i) = zeta_value(A, power, Cplx(z), cfg) - le.a[2] * z * z - le.a[3] * z * z * z;
  }
  Eigen::VectorXcd sol = M.colPivHouseholderQr().solve(rhs);
  double dev = std::max({std::abs(sol(0) - le.a_minus1), std::abs(sol(1) - le.a[0]),
                         std::abs(sol(2) - le.a[1])});
  report(8, "Prop-style Laurent coefficients match the zeta fit at z = +-0.05, +-0.1",
         cert.certified && dev <= 1e-5,
         "max coefficient deviation " + fmt(dev) + (cert.certified ? "" : ", NOT CERTIFIED"));
}

// -------------------------------------------------------------- criterion 9

void criterion_oracle_crosscheck() {
  SymbolContext ctx{kTheta, Cplx(0.0, 1.0)};
  QuadratureConfig fxcfg;
  fxcfg.r0 = 0.8;
  fxcfg.r1 = 1.0;
  fxcfg.depth = 3;
  std::mt19937_64 rng(13);
  double worst_tr = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    AlgebraElement a = AlgebraElement::unit(kTheta, Cplx(0.9, -0.2)) +
                       rnd_element(rng, kTheta, 1, 0.4, 3);
    RadialPowerFixture fx = make_radial_power_fixture(ctx, 4.0, 1.75, fxcfg);
    RadialRemainder rem = fx.remainder;
    rem.factor = a;
    OperatorSymbol scaled(ctx, fx.expansion.order(), fx.expansion.trunc());
    for (const auto& [key, comp] : fx.expansion.components())
      for (const auto& [mode, f] : comp)
        for (const auto& [amode, amp] : a.coeffs())
          scaled.deposit(key.first, amode.first, amode.second, f * amp);
    Cplx tr_symbol = canonical_trace(scaled, fxcfg, {}, nullptr, &rem);
    SweepResult sweep = lattice_radial_trace(fx.radial, fx.expansion.order(), a,
                                             {16, 24, 32, 40});
    Cplx tr_lattice = sweep.extrapolated / (kTwoPi * kTwoPi);
    worst_tr = std::max(worst_tr,
                        std::abs(tr_symbol - tr_lattice) / std::max(1.0, std::abs(tr_symbol)));
  }

  SymbolContext gctx{kTheta, Cplx(0.3, 1.2)};
  double worst_hom = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    std::map<std::pair<int, int>, AlgebraElement> c1, c2;
    c1[{1, 0}] = rnd_element(rng, kTheta, 1, 0.8, 3);
    c1[{0, 0}] = rnd_element(rng, kTheta, 1, 0.8, 3);
    c2[{0, 1}] = rnd_element(rng, kTheta, 1, 0.8, 3);
    c2[{1, 1}] = rnd_element(rng, kTheta, 1, 0.8, 3);
    OperatorSymbol P = from_differential(gctx, c1), Q = from_differential(gctx, c2);
    AlgebraElement x = rnd_element(rng, kTheta, 2, 1.0, 4);
    AlgebraElement lhs = apply_symbol_op(star_product(P, Q), x);
    AlgebraElement rhs = apply_symbol_op(P, apply_symbol_op(Q, x));
    worst_hom = std::max(worst_hom, max_abs_diff(lhs, rhs) / std::max(1.0, rhs.max_abs()));
  }

  report(9, "oracle: TR vs lattice trace (Poisson caveat) + composition homomorphism",
         worst_tr <= 1e-3 && worst_hom <= 1e-12,
         "trace gap " + fmt(worst_tr) + ", composition defect " + fmt(worst_hom));
}

// ------------------------------------------------------------- criterion 10

void criterion_property_suites() {
  std::ostringstream detail;
  bool ok = true;
  std::mt19937_64 rng(2026);

  // algebra axioms
  {
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      AlgebraElement a = rnd_element(rng, kTheta, 2, 1.0, 4);
      AlgebraElement b = rnd_element(rng, kTheta, 2, 1.0, 4);
      AlgebraElement c = rnd_element(rng, kTheta, 2, 1.0, 4);
      double scale = std::max(1.0, (a * b * c).max_abs());
      worst = std::max(worst, max_abs_diff((a * b) * c, a * (b * c)) / scale);
      worst = std::max(worst, std::abs(trace_phi0(a * b) - trace_phi0(b * a)));
      AlgebraElement lhs = derive(a * b, Derivation::delta1);
      AlgebraElement rhs = derive(a, Derivation::delta1) * b + a * derive(b, Derivation::delta1);
      worst = std::max(worst, max_abs_diff(lhs, rhs) / std::max(1.0, lhs.max_abs()));
      worst = std::max(worst, std::abs(trace_phi0(a * derive(b, Derivation::delta2)) +
                                       trace_phi0(derive(a, Derivation::delta2) * b)));
    }
    ok = ok && worst <= 1e-12;
    detail << "algebra " << fmt(worst);
  }

  // xi-calculus derivatives against finite differences
  {
    Cplx tau(0.3, 1.2);
    using CF = CoefficientFunction;
    std::vector<CF> fs{CF::lambda(tau) * CF::ell(tau, -2),
                       CF::g_power(tau, -1) * CF::log_norm(tau, 1),
                       CF::ellbar(tau, -1) * CF::monomial(tau, Cplx(0.7, 0.3), 1, 1)};
    double worst = 0.0;
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (const CF& f : fs)
      for (int axis : {1, 2}) {
        CF df = f.partial(axis);
        for (int p = 0; p < 6; ++p) {
          double x = u(rng), y = u(rng);
          double r2 = x * x + y * y;
          if (r2 < 0.36 || r2 > 4.0) {
            --p;
            continue;
          }
          const double h = 1e-6;
          Cplx fd = axis == 1 ? (f.evaluate(x + h, y) - f.evaluate(x - h, y)) / (2.0 * h)
                              : (f.evaluate(x, y + h) - f.evaluate(x, y - h)) / (2.0 * h);
          worst = std::max(worst,
                           std::abs(df.evaluate(x, y) - fd) / std::max(1.0, std::abs(fd)));
        }
      }
    ok = ok && worst <= 1e-6;
    detail << ", xi-derivative " << fmt(worst);
  }

  // symbol group property
  {
    SymbolContext ctx{kTheta, Cplx(0.3, 1.2)};
    OperatorSymbol delta = delta_of(ctx, scenario_alpha0(kTheta));
    ParametricSymbol power = complex_power(delta, 5);
    const Cplx z(-0.35, 0.1), w(0.8, -0.25);
    OperatorSymbol pa = power.substitute(z), pb = power.substitute(w),
                   pc = power.substitute(z + w);
    OperatorSymbol prod = star_product(pa, pb, std::min(pa.trunc(), pb.trunc()));
    double worst = 0.0;
    for (int j = 0; j <= 3; ++j) {
      Component got = prod.homogeneous_component(2.0 * (z + w) - Cplx(double(j)));
      Component want = pc.homogeneous_component(2.0 * (z + w) - Cplx(double(j)));
      for (double t : {0.8, 2.9, 5.2}) {
        worst = std::max(
            worst, max_abs_diff(evaluate_component(got, kTheta, std::cos(t), std::sin(t)),
                                evaluate_component(want, kTheta, std::cos(t), std::sin(t))));
      }
    }
    ok = ok && worst <= 1e-8;
    detail << ", group property " << fmt(worst);
  }

  // resolvent defect
  {
    SymbolContext ctx{kTheta, Cplx(0.3, 1.2)};
    OperatorSymbol delta = delta_of(ctx, scenario_alpha0(kTheta));
    ResolventSymbol res = resolvent_expansion(delta, 5);
    double worst = 0.0;
    for (Cplx lambda : {Cplx(-2.0, 0.0), Cplx(0.5, 1.5), Cplx(-0.3, -2.0), Cplx(-5.0, 0.7),
                        Cplx(2.0, 3.0)}) {
      auto defect = resolvent_defect(delta, res, 0.8, -0.6, lambda);
      for (const auto& d : defect) worst = std::max(worst, d.max_abs());
    }
    ok = ok && worst <= 1e-10;
    detail << ", resolvent defect " << fmt(worst);
  }

  report(10, "property suites (algebra, xi-calculus, group property, resolvent)", ok,
         detail.str());
}

}  // namespace

int main() {
  std::printf("acceptance suite: curvature of the determinant line bundle calculus\n");
  criteria_curvature_and_res_variation();
  criterion_lemma52_symbol();
  criterion_circle_pin();
  criterion_trace_property();
  criterion_cutoff_well_defined();
  criterion_pole_structure();
  criterion_laurent_consistency();
  criterion_oracle_crosscheck();
  criterion_property_suites();
  std::printf("%s: %d criterion(s) failed\n", g_failures ? "FAILURE" : "SUCCESS", g_failures);
  return g_failures ? 1 : 0;
}
