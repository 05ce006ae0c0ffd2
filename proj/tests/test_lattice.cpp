#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nctsym/lattice.hpp"
#include "oracle_helpers.hpp"

using namespace nctsym;
using nctsym::testing::random_element;

namespace {
const SymbolContext ctx{kDefaultTheta, Cplx(0.3, 1.2)};
const SymbolContext ctx_i{kDefaultTheta, Cplx(0.0, 1.0)};
}  // namespace

TEST_CASE("apply_symbol_op basics") {
  AlgebraElement U = AlgebraElement::monomial(ctx.theta, 1, 0);

  SUBCASE("sigma = l reproduces dbar") {
    std::mt19937_64 rng(2);
    OperatorSymbol l = OperatorSymbol::dbar(ctx);
    CHECK(approx_equal(apply_symbol_op(l, U), derive(U, Derivation::dbar, ctx.tau), 1e-14));
    AlgebraElement a = random_element(rng, ctx.theta, 3);
    CHECK(approx_equal(apply_symbol_op(l, a), derive(a, Derivation::dbar, ctx.tau), 1e-13));
  }

  SUBCASE("sigma = 1 is the identity map") {
    std::mt19937_64 rng(3);
    OperatorSymbol one = OperatorSymbol::multiplication(ctx, AlgebraElement::unit(ctx.theta));
    AlgebraElement a = random_element(rng, ctx.theta, 3);
    CHECK(approx_equal(apply_symbol_op(one, a), a, 1e-14));
  }

  SUBCASE("chi-regularized g^{-1} on U") {
    QuadratureConfig cfg;
    OperatorSymbol delta0 = star_product(adjoint_symbol(OperatorSymbol::dbar(ctx)),
                                         OperatorSymbol::dbar(ctx));
    OperatorSymbol par = parametrix(delta0, 3);  // exactly g^{-1}... as representative
    AlgebraElement got = apply_symbol_op(par, U, &cfg);
    // chi(1,0) = 1 and g(1,0) = 1, so the result is U itself
    CHECK(approx_equal(got, U, 1e-13));
  }

  SUBCASE("representatives demand a cut-off; exact singular symbols fail at the origin") {
    std::mt19937_64 rng(4);
    OperatorSymbol D = OperatorSymbol::cauchy_riemann(ctx, random_element(rng, ctx.theta, 1, 0.2));
    OperatorSymbol par = parametrix(D, 3);
    AlgebraElement a = AlgebraElement::unit(ctx.theta);
    CHECK_THROWS_AS(apply_symbol_op(par, a), std::invalid_argument);
    OperatorSymbol linv = parametrix(OperatorSymbol::dbar(ctx), 3);  // exact l^{-1}
    CHECK(linv.is_exact());
    CHECK_THROWS_AS(apply_symbol_op(linv, a), std::domain_error);
  }
}

TEST_CASE("star product matches operator composition exactly on polynomial symbols") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    std::map<std::pair<int, int>, AlgebraElement> c1, c2;
    c1[{1, 0}] = random_element(rng, ctx.theta, 2, 0.8);
    c1[{0, 0}] = random_element(rng, ctx.theta, 2, 0.8);
    c2[{0, 1}] = random_element(rng, ctx.theta, 2, 0.8);
    c2[{1, 1}] = random_element(rng, ctx.theta, 2, 0.8);
    OperatorSymbol P = from_differential(ctx, c1);
    OperatorSymbol Q = from_differential(ctx, c2);
    OperatorSymbol PQ = star_product(P, Q);
    AlgebraElement a = random_element(rng, ctx.theta, 2);
    AlgebraElement lhs = apply_symbol_op(PQ, a);
    AlgebraElement rhs = apply_symbol_op(P, apply_symbol_op(Q, a));
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, rhs.max_abs()));
  }
}

TEST_CASE("lattice matrices") {
  SUBCASE("dbar is diagonal and dbar* is its adjoint") {
    LatticeOperator d = build_dbar(ctx, 3);
    LatticeOperator ds = build_dbar_star(ctx, 3);
    CHECK((ds.matrix() - d.matrix().adjoint()).norm() == 0.0);
    CHECK(std::abs(d.matrix()(d.index(2, -1), d.index(2, -1)) -
                   (Cplx(2.0) - ctx.tau)) < 1e-15);
  }

  SUBCASE("multiplication matrices represent the algebra on the interior") {
    std::mt19937_64 rng(6);
    AlgebraElement a = random_element(rng, ctx.theta, 1, 0.7);
    AlgebraElement b = random_element(rng, ctx.theta, 1, 0.7);
    const int M = 6;
    LatticeOperator ma = build_multiplication(ctx, a, M);
    LatticeOperator mb = build_multiplication(ctx, b, M);
    LatticeOperator mab = build_multiplication(ctx, a * b, M);
    // check on interior modes: |m|,|n| <= M - 2
    std::mt19937_64 rng2(7);
    AlgebraElement x = random_element(rng2, ctx.theta, M - 2, 1.0);
    CHECK(max_abs_diff(ma.apply(mb.apply(x)), mab.apply(x)) < 1e-12);
    // adjoint consistency
    LatticeOperator mas = build_multiplication(ctx, adjoint(a), M);
    AlgebraElement y = random_element(rng2, ctx.theta, M - 2, 1.0);
    Cplx lhs = inner_product(mas.apply(x), y);
    Cplx rhs = inner_product(x, ma.apply(y));
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }

  SUBCASE("box too small") {
    AlgebraElement far = AlgebraElement::monomial(ctx.theta, 3, 0);
    CHECK_THROWS_AS(build_multiplication(ctx, far, 3), std::invalid_argument);
  }

  SUBCASE("Delta spectrum at tau = i, alpha = 0 is {m^2 + n^2}") {
    LatticeOperator delta = build_laplacian(ctx_i, AlgebraElement::zero(ctx_i.theta), 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta.matrix(), Eigen::EigenvaluesOnly);
    std::vector<double> want;
    for (int m = -3; m <= 3; ++m)
      for (int n = -3; n <= 3; ++n) want.push_back(double(m * m + n * n));
    std::sort(want.begin(), want.end());
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      CHECK(std::abs(es.eigenvalues()(i) - want[std::size_t(i)]) < 1e-12);
  }

  SUBCASE("Delta(alpha) is positive semidefinite for random alpha") {
    std::mt19937_64 rng(8);
    AlgebraElement alpha = random_element(rng, ctx.theta, 1, 0.8);
    LatticeOperator delta = build_laplacian(ctx, alpha, 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta.matrix(), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    // eigenpair residuals
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ef(delta.matrix());
    double nrm = delta.matrix().norm();
    for (int i : {0, 10, 80}) {
      Eigen::VectorXcd v = ef.eigenvectors().col(i);
      double resid = (delta.matrix() * v - ef.eigenvalues()(i) * v).norm();
      CHECK(resid <= 1e-10 * nrm);
    }
  }

  SUBCASE("kernel of Delta_0 is the constants") {
    KernelInfo k = lattice_kernel(ctx, AlgebraElement::zero(ctx.theta), 4);
    REQUIRE(k.modes.size() == 1);
    CHECK(k.modes[0] == std::pair<int, int>{0, 0});
  }
}

TEST_CASE("spectral traces") {
  SUBCASE("Tr(Delta_0^{-2}) at tau = i approaches 4 zeta(2) beta(2)") {
    const double want = 6.02681203969194;  // 4 zeta(2) beta(2)
    auto f = [](double r) { return r < 0.5 ? 0.0 : std::pow(r, -4.0); };
    SweepResult sweep = lattice_radial_trace(f, Cplx(-4.0), AlgebraElement::unit(ctx_i.theta),
                                             {16, 24, 32, 40});
    CHECK(std::abs(sweep.extrapolated - want) < 1e-4);
    CHECK(std::abs(sweep.values.back() - want) < 0.02);  // raw partial sum is much worse

    // same value through the dense eigensolver at a fixed box, kernel excluded
    LatticeOperator delta = build_laplacian(ctx_i, AlgebraElement::zero(ctx_i.theta), 16);
    LatticeOperator one =
        build_multiplication(ctx_i, AlgebraElement::unit(ctx_i.theta), 16);
    Cplx fixed = spectral_function_trace(one, delta, [](double l) { return Cplx(std::pow(l, -2.0)); });
    double partial = 0.0;
    for (int m = -16; m <= 16; ++m)
      for (int n = -16; n <= 16; ++n)
        if (m || n) partial += std::pow(double(m * m + n * n), -2.0);
    CHECK(std::abs(fixed - partial) < 1e-10);
  }

  SUBCASE("Tr(A Pi) for A = multiplication recovers phi_0(a)") {
    std::mt19937_64 rng(9);
    AlgebraElement a = random_element(rng, ctx.theta, 1, 0.8) +
                       AlgebraElement::unit(ctx.theta, 0.37);
    const int M = 5;
    LatticeOperator delta = build_laplacian(ctx, AlgebraElement::zero(ctx.theta), M);
    LatticeOperator mul = build_multiplication(ctx, a, M);
    // projection trace: sum over eigenpairs below the cut
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta.matrix());
    Cplx acc(0.0);
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) < 1e-10) {
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        acc += (v.adjoint() * mul.matrix() * v)(0);
      }
    CHECK(std::abs(acc - trace_phi0(a)) < 1e-12);
  }

  SUBCASE("eigensolve sweep extrapolates toward the lattice value") {
    // Tr(Delta_0^{-2}) at tau = i via small-box eigendecompositions
    const double want = 6.02681203969194;
    SweepResult sweep = spectral_function_trace_sweep(
        ctx_i, AlgebraElement::unit(ctx_i.theta), AlgebraElement::zero(ctx_i.theta),
        [](double l) { return Cplx(std::pow(l, -2.0)); }, Cplx(-4.0), {8, 10, 12});
    CHECK(std::abs(sweep.extrapolated - want) < 2e-2);
    CHECK(std::abs(sweep.values.back() - want) < 0.06);
    CHECK(std::abs(sweep.extrapolated - want) < std::abs(sweep.values.back() - want));
  }

  SUBCASE("f = identity, A = identity reduces to the matrix trace") {
    std::mt19937_64 rng(10);
    AlgebraElement alpha = random_element(rng, ctx.theta, 1, 0.4);
    LatticeOperator delta = build_laplacian(ctx, alpha, 4);
    LatticeOperator one = build_multiplication(ctx, AlgebraElement::unit(ctx.theta), 4);
    Cplx got = spectral_function_trace(one, delta, [](double l) { return Cplx(l); }, -1.0);
    CHECK(std::abs(got - delta.matrix().trace()) < 1e-9);
  }
}

TEST_CASE("trace sweeps reject non-decaying symbols") {
  auto f = [](double r) { return r < 0.5 ? 0.0 : std::pow(r, -1.0); };
  CHECK_THROWS_AS(
      lattice_radial_trace(f, Cplx(-1.0), AlgebraElement::unit(ctx.theta), {8, 12}),
      std::invalid_argument);
}

TEST_CASE("invertibility certificates") {
  SUBCASE("alpha = 0 is not invertible (constants in the kernel)") {
    InvertibilityCertificate c = check_invertibility(ctx, AlgebraElement::zero(ctx.theta));
    CHECK_FALSE(c.certified);
    CHECK(c.sigma_min.front() < 1e-7);
  }

  SUBCASE("constant shift is certified with sigma_min = min |m + tau n + c|") {
    Cplx shift(0.4, 0.2);
    InvertibilityCertificate c =
        check_invertibility(ctx, AlgebraElement::unit(ctx.theta, shift), {6, 8});
    CHECK(c.certified);
    double want = 1e9;
    for (int m = -8; m <= 8; ++m)
      for (int n = -8; n <= 8; ++n)
        want = std::min(want, std::abs(Cplx(double(m)) + ctx.tau * Cplx(double(n)) + shift));
    CHECK(std::abs(c.sigma_min.back() - want) < 1e-10);
  }

  SUBCASE("random small alpha with invertible constant term is certified") {
    std::mt19937_64 rng(11);
    AlgebraElement alpha = AlgebraElement::unit(ctx.theta, Cplx(0.45, 0.1)) +
                           random_element(rng, ctx.theta, 1, 0.04);
    InvertibilityCertificate c = check_invertibility(ctx, alpha, {6, 9, 12});
    CHECK(c.certified);
  }
}
