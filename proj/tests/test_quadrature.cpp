#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nctsym/quadrature.hpp"
#include "oracle_helpers.hpp"

using namespace nctsym;

TEST_CASE("config validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  QuadratureConfig bad = cfg;
  bad.r0 = 0.9;
  bad.r1 = 0.6;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.r1 = 1.2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.circle_nodes = 768;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("chi is a C2 bump") {
  QuadratureConfig cfg;
  CHECK(chi_cutoff(0.2, cfg) == 0.0);
  CHECK(chi_cutoff(0.5, cfg) == 0.0);
  CHECK(chi_cutoff(1.0, cfg) == 1.0);
  CHECK(chi_cutoff(3.0, cfg) == 1.0);
  CHECK(chi_cutoff(0.75, cfg) == doctest::Approx(0.5));
  // C2 join: second difference stays bounded through the break points
  for (double r : {0.5, 1.0}) {
    double h = 1e-4;
    double d2 = (chi_cutoff(r + h, cfg) - 2 * chi_cutoff(r, cfg) + chi_cutoff(r - h, cfg)) / (h * h);
    CHECK(std::abs(d2) < 25.0);
  }
}

TEST_CASE("gauss legendre integrates polynomials exactly") {
  auto f = [](double x) { return Cplx(std::pow(x, 7) - 3.0 * x * x + 1.0); };
  Cplx got = gl_integrate(f, -1.0, 2.0, 8);
  // antiderivative x^8/8 - x^3 + x
  double want = (std::pow(2.0, 8) / 8 - 8 + 2) - (1.0 / 8 + 1 - 1);
  CHECK(std::abs(got - want) < 1e-13);
}

TEST_CASE("circle trapezoid hits smooth periodic integrands at spectral accuracy") {
  ConvergenceInfo conv;
  // mass pin: total measure of the circle is 1/(2 pi)
  Cplx mass = circle_integral_scalar([](double) { return Cplx(1.0); }, 64, 1e-12, &conv);
  CHECK(std::abs(mass - 1.0 / kTwoPi) < 1e-15);

  // (2 pi)^{-2} int dtheta / g = 1/(2 pi Im tau): det of the g-form is (Im tau)^2
  for (Cplx tau : {Cplx(0.0, 1.0), Cplx(0.3, 1.2), Cplx(-0.4, 0.8), Cplx(1.1, 2.3),
                   Cplx(0.25, 0.35)}) {
    auto ginv = [tau](double t) {
      double x = std::cos(t), y = std::sin(t);
      return Cplx(1.0) / ((Cplx(x) + tau * Cplx(y)) * (Cplx(x) + std::conj(tau) * Cplx(y)));
    };
    Cplx got = circle_integral_scalar(ginv, 1024, 1e-10, &conv);
    CHECK(std::abs(got - 1.0 / (kTwoPi * tau.imag())) < 1e-10);
  }

  // odd symmetry
  Cplx odd = circle_integral_scalar([](double t) { return Cplx(std::cos(t) * std::sin(t)); },
                                    64, 1e-12, nullptr);
  CHECK(std::abs(odd) < 1e-16);
}

TEST_CASE("circle doubling flags non-converged integrands") {
  // 8 -> 16 nodes cannot resolve g^{-1} for a nearly degenerate tau
  Cplx tau(0.0, 0.05);
  auto ginv = [tau](double t) {
    double x = std::cos(t), y = std::sin(t);
    return Cplx(1.0) / ((Cplx(x) + tau * Cplx(y)) * (Cplx(x) + std::conj(tau) * Cplx(y)));
  };
  CHECK_THROWS_AS(circle_integral_scalar(ginv, 8, 1e-10, nullptr), ConvergenceError);
}

TEST_CASE("improper radial integral with algebraic decay") {
  // int_1^inf r^{-3} dr = 1/2; the substitution turns this into a rational
  // integrand, so the rule is spectrally accurate
  Cplx got = improper_radial_integral([](double r) { return Cplx(std::pow(r, -3.0)); }, 1.0, 64,
                                      1e-11, nullptr);
  CHECK(std::abs(got - 0.5) < 1e-12);
  // a remainder-style tail r^{-8} log r
  Cplx got2 = improper_radial_integral(
      [](double r) { return Cplx(std::pow(r, -8.0) * std::log(r)); }, 1.0, 96, 1e-9, nullptr);
  CHECK(std::abs(got2 - 1.0 / 49.0) < 1e-10);  // int_1^inf r^{-8} log r = 1/7^2
}

TEST_CASE("radial antiderivative differentiates back to r^{d+1} log^l r") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(1.1, 3.0);
  for (Cplx d : {Cplx(-3.5, 0.0), Cplx(-1.0, 0.0), Cplx(0.7, 0.4), Cplx(-2.0, 0.0)}) {
    for (int l : {0, 1, 2, 3}) {
      double r = ur(rng);
      double h = 1e-5;
      Cplx fd = (radial_antiderivative(d, l, r + h) - radial_antiderivative(d, l, r - h)) /
                (2.0 * h);
      Cplx want = std::exp((d + 1.0) * std::log(r)) * ipow(Cplx(std::log(r)), l);
      CHECK(std::abs(fd - want) < 1e-8 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("finite part constant equals the convergent tail integral when it converges") {
  // for Re d < -2 the constant is literally int_1^inf r^{d+1} log^l r dr;
  // sum dyadic panels [2^k, 2^{k+1}] until the tail is negligible
  for (int l : {0, 1, 2}) {
    Cplx d(-3.4, 0.2);
    auto f = [&](double r) {
      return std::exp((d + 1.0) * std::log(r)) * ipow(Cplx(std::log(r)), l);
    };
    Cplx tail(0.0);
    double a = 1.0;
    for (int k = 0; k < 48; ++k, a *= 2.0) tail += gl_integrate(f, a, 2.0 * a, 48);
    CHECK(std::abs(radial_finite_part_constant(d, l) - tail) < 1e-10);
  }
  // at d == -2 the radial profile contributes no constant at all
  CHECK(radial_finite_part_constant(Cplx(-2.0), 0) == Cplx(0.0));
  CHECK(radial_finite_part_constant(Cplx(-2.0), 3) == Cplx(0.0));
}
