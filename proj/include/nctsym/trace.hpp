#pragma once

// Residue densities, cut-off integrals, the canonical trace TR, zeta values
// of the family TR(A Q^{-z}) and its Laurent expansion at z = 0.
//
// Convention: the planar measure is dxi = (2 pi)^{-2} d_L xi, so the unit
// circle has total mass 1/(2 pi).  TR, the cut-off integral and zeta values
// are defined on explicit symbol representatives OP(chi * sum sigma_{a-j}),
// with the representative cut-off taken from the QuadratureConfig.  The
// angular and radial parts of every homogeneous piece separate, so the
// cut-off constants reduce to circle integrals times exact radial
// antiderivatives, with numeric quadrature only on [r0, 1] and on explicit
// remainders.

#include <functional>
#include <optional>

#include "nctsym/quadrature.hpp"
#include "nctsym/symbol.hpp"

namespace nctsym {

// Overrides for the decomposition used when evaluating the cut-off integral
// of a fixed representative.  Components at offsets >= depth are treated as
// part of the integrable remainder (requires their order < -2).
struct CutoffDecomposition {
  std::optional<double> r0, r1;
  std::optional<int> depth;
};

// Explicit scalar radial remainder w(|xi|) (x) factor added to the
// decomposition, integrated as (2 pi)^{-1} int_0^inf w(r) r dr.
struct RadialRemainder {
  std::function<Cplx(double)> fn;
  AlgebraElement factor;
};

AlgebraElement circle_integral_component(const Component& comp, const SymbolContext& ctx,
                                         const QuadratureConfig& cfg,
                                         ConvergenceInfo* conv = nullptr);

// res(P) = int_{|xi|=1} sigma_{-2,0}; zero for non-integer order.  Throws
// when the (-2,0) component lies below the truncation depth.
AlgebraElement res_density(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                           ConvergenceInfo* conv = nullptr);
Cplx wodzicki_residue(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                      ConvergenceInfo* conv = nullptr);

AlgebraElement cutoff_integral(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                               const CutoffDecomposition& dec = {},
                               ConvergenceInfo* conv = nullptr,
                               const RadialRemainder* remainder = nullptr);

// TR = phi_0 of the cut-off integral.
Cplx canonical_trace(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                     const CutoffDecomposition& dec = {}, ConvergenceInfo* conv = nullptr,
                     const RadialRemainder* remainder = nullptr);

// zeta(A, Q, z) = TR(A Q^{-z}).  The overload taking a ParametricSymbol
// reuses a precomputed complex-power family, which matters inside fits.
Cplx zeta_value(const OperatorSymbol& a, const OperatorSymbol& delta, Cplx z,
                const QuadratureConfig& cfg, ConvergenceInfo* conv = nullptr);
Cplx zeta_value(const OperatorSymbol& a, const ParametricSymbol& power, Cplx z,
                const QuadratureConfig& cfg, ConvergenceInfo* conv = nullptr);

// Fourier modes spanning the kernel of Delta on the lattice oracle.
struct KernelInfo {
  std::vector<std::pair<int, int>> modes;
};

// Tr(P Pi) for the projection onto the listed kernel modes; representative
// symbols are weighted by the representative cut-off at each mode.
Cplx kernel_trace(const OperatorSymbol& sym, const KernelInfo& kernel,
                  const QuadratureConfig& cfg);

struct LaurentExpansion {
  Cplx a_minus1;
  std::vector<Cplx> a;  // a[k] multiplies z^k, k = 0..K
};

// Laurent coefficients of z -> TR(A Delta^{-z}) at z = 0, assembled from
// res(A), cut-off integrals of A (log Delta)^k and residues of
// A (log Delta)^{k+1}, plus kernel corrections.
LaurentExpansion laurent_at_zero(const OperatorSymbol& a, const OperatorSymbol& delta, int K,
                                 const QuadratureConfig& cfg, const KernelInfo& kernel = {},
                                 ConvergenceInfo* conv = nullptr);

// int_{B(R)} of the representative, R >= r1 (diagnostic for the R-sweep).
AlgebraElement ball_integral(const OperatorSymbol& sym, double R, const QuadratureConfig& cfg,
                             ConvergenceInfo* conv = nullptr);

struct RSweepFit {
  Cplx constant;      // fitted constant term c(sigma)
  Cplx log_coeff;     // fitted coefficient of log R
  double residual;    // max fit residual over the radii
};

// Least-squares fit of phi_0(int_{B(R)}) against the expansion basis
// {R^{d+2} log^m R, log^m R, 1} derived from the stored components.
RSweepFit r_sweep_fit(const OperatorSymbol& sym, const QuadratureConfig& cfg,
                      const std::vector<double>& radii);

// Representative data for the smooth scalar symbol (c + rho)^{-s} at
// tau = i: the asymptotic expansion sum_j binom(-s,j) c^j g^{-s-j} to the
// configured depth plus the exact integrable remainder.
struct RadialPowerFixture {
  OperatorSymbol expansion;
  RadialRemainder remainder;
  std::function<double(double)> radial;  // r -> (c + r^2)^{-s}
  Cplx exact_integral;                   // c^{1-s} / (4 pi (s-1))
};

RadialPowerFixture make_radial_power_fixture(const SymbolContext& ctx, double c, double s,
                                             const QuadratureConfig& cfg);

}  // namespace nctsym
