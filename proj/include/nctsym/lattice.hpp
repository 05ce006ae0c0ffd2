#pragma once

// Exact finite-lattice representation of operators on the GNS space for
// brute-force validation.  The basis is the orthonormal family
// e_{mn} = U^m V^n with |m|, |n| <= M; dbar acts diagonally with entries
// m + tau n, left multiplications shift modes with the commutation phase,
// and Delta = D^dagger D is Hermitian positive semidefinite.

#include <Eigen/Dense>
#include <functional>

#include "nctsym/quadrature.hpp"
#include "nctsym/symbol.hpp"
#include "nctsym/trace.hpp"

namespace nctsym {

class LatticeOperator {
public:
  struct Meta {
    std::string kind;
    double theta = 0.0;
    Cplx tau{0.0, 1.0};
    int boundary_margin = 0;  // modes within M - margin are exact
  };

  LatticeOperator(int M, Eigen::MatrixXcd mat, Meta meta);

  int M() const { return M_; }
  int dim() const { return 2 * M_ + 1; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  const Meta& meta() const { return meta_; }

  int index(int m, int n) const;
  bool in_box(int m, int n) const { return std::abs(m) <= M_ && std::abs(n) <= M_; }

  Eigen::VectorXcd to_vector(const AlgebraElement& a) const;
  AlgebraElement to_element(const Eigen::VectorXcd& v) const;
  AlgebraElement apply(const AlgebraElement& a) const;

private:
  int M_;
  Eigen::MatrixXcd mat_;
  Meta meta_;
};

LatticeOperator build_dbar(SymbolContext ctx, int M);
LatticeOperator build_dbar_star(SymbolContext ctx, int M);
// Left multiplication by a; M must exceed the support of a.
LatticeOperator build_multiplication(SymbolContext ctx, const AlgebraElement& a, int M);
// D(alpha) = dbar + alpha, Delta(alpha) = D^dagger D.
LatticeOperator build_cauchy_riemann(SymbolContext ctx, const AlgebraElement& alpha, int M);
LatticeOperator build_laplacian(SymbolContext ctx, const AlgebraElement& alpha, int M);

// P_sigma(a) = sum sigma(m,n) a_{mn} U^m V^n.  chi (when supplied)
// regularizes the origin for truncated representatives; exact symbols are
// evaluated bare.
AlgebraElement apply_symbol_op(const OperatorSymbol& sigma, const AlgebraElement& a,
                               const QuadratureConfig* chi = nullptr);

struct SweepResult {
  std::vector<int> Ms;
  std::vector<Cplx> values;
  Cplx extrapolated{0.0};
  double error_estimate = 0.0;
};

// Lattice trace of the operator with the given (chi-regularized) symbol:
// sum over modes of phi_0(sigma(m,n)), swept over box sizes with a
// power-law tail fit T(M) = T_inf + c M^{order+2}.
SweepResult lattice_symbol_trace(const OperatorSymbol& sigma, const QuadratureConfig& chi,
                                 const std::vector<int>& Ms);
// Same for an explicit scalar radial symbol f(|xi|) (x) a.
SweepResult lattice_radial_trace(const std::function<double(double)>& f, Cplx order,
                                 const AlgebraElement& coefficient, const std::vector<int>& Ms);

// Tr(A f(Delta)) by dense Hermitian eigendecomposition at a fixed box size.
Cplx spectral_function_trace(const LatticeOperator& A, const LatticeOperator& delta,
                             const std::function<Cplx(double)>& f, double eigen_floor = 1e-10);

// Same across a box sweep, extrapolated with the power-law tail of the given
// total decay order (must lie below -2); A = multiplication by a,
// Delta = Delta(alpha), kernel modes excluded.
SweepResult spectral_function_trace_sweep(SymbolContext ctx, const AlgebraElement& a,
                                          const AlgebraElement& alpha,
                                          const std::function<Cplx(double)>& f, Cplx order,
                                          const std::vector<int>& Ms);

// Smallest singular value of D(alpha) across a box sweep; certified when
// every value stays above the threshold and the sequence is not collapsing.
struct InvertibilityCertificate {
  std::vector<int> Ms;
  std::vector<double> sigma_min;
  bool certified = false;
  double threshold = 1e-6;
};

InvertibilityCertificate check_invertibility(SymbolContext ctx, const AlgebraElement& alpha,
                                             const std::vector<int>& Ms = {8, 12, 16},
                                             double threshold = 1e-6);

// Kernel modes of Delta(alpha) at box size M: eigenvectors below the cut
// are reported by their dominant Fourier mode.
KernelInfo lattice_kernel(SymbolContext ctx, const AlgebraElement& alpha, int M,
                          double cut = 1e-8);

}  // namespace nctsym
