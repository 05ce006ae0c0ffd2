#include "nctsym/lattice.hpp"

#include <cmath>

namespace nctsym {

LatticeOperator::LatticeOperator(int M, Eigen::MatrixXcd mat, Meta meta)
    : M_(M), mat_(std::move(mat)), meta_(std::move(meta)) {
  if (M < 1) throw std::invalid_argument("LatticeOperator: box size must be >= 1");
  const int d = (2 * M + 1) * (2 * M + 1);
  if (mat_.rows() != d || mat_.cols() != d)
    throw std::invalid_argument("LatticeOperator: matrix size does not match the box");
}

int LatticeOperator::index(int m, int n) const {
  if (!in_box(m, n)) throw std::out_of_range("LatticeOperator: mode outside the box");
  return (m + M_) * (2 * M_ + 1) + (n + M_);
}

Eigen::VectorXcd LatticeOperator::to_vector(const AlgebraElement& a) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim() * dim());
  for (const auto& [mode, amp] : a.coeffs()) {
    if (!in_box(mode.first, mode.second))
      throw std::out_of_range("LatticeOperator: element support exceeds the box");
    v(index(mode.first, mode.second)) = amp;
  }
  return v;
}

AlgebraElement LatticeOperator::to_element(const Eigen::VectorXcd& v) const {
  AlgebraElement a(meta_.theta);
  for (int m = -M_; m <= M_; ++m)
    for (int n = -M_; n <= M_; ++n) {
      Cplx amp = v(index(m, n));
      if (amp != Cplx(0.0)) a += AlgebraElement::monomial(meta_.theta, m, n, amp);
    }
  return a;
}

AlgebraElement LatticeOperator::apply(const AlgebraElement& a) const {
  return to_element(mat_ * to_vector(a));
}

LatticeOperator build_dbar(SymbolContext ctx, int M) {
  const int d = (2 * M + 1) * (2 * M + 1);
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(d, d);
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      int i = (m + M) * (2 * M + 1) + (n + M);
      mat(i, i) = Cplx(double(m)) + ctx.tau * Cplx(double(n));
    }
  return LatticeOperator(M, std::move(mat), {"dbar", ctx.theta, ctx.tau, 0});
}

LatticeOperator build_dbar_star(SymbolContext ctx, int M) {
  LatticeOperator d = build_dbar(ctx, M);
  return LatticeOperator(M, d.matrix().adjoint(), {"dbar_star", ctx.theta, ctx.tau, 0});
}

LatticeOperator build_multiplication(SymbolContext ctx, const AlgebraElement& a, int M) {
  if (a.theta() != ctx.theta)
    throw std::invalid_argument("build_multiplication: theta mismatch");
  const int margin = a.max_mode();
  if (M <= margin)
    throw std::invalid_argument(
        "build_multiplication: box too small to contain the shifted modes");
  const int d = (2 * M + 1) * (2 * M + 1);
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(d, d);
  for (int m = -M; m <= M; ++m)
    for (int n = -M; n <= M; ++n) {
      int col = (m + M) * (2 * M + 1) + (n + M);
      for (const auto& [mode, amp] : a.coeffs()) {
        int mm = mode.first + m, nn = mode.second + n;
        if (std::abs(mm) > M || std::abs(nn) > M) continue;  // boundary truncation
        int row = (mm + M) * (2 * M + 1) + (nn + M);
        mat(row, col) += amp * unit_phase(ctx.theta, static_cast<long long>(mode.second) * m);
      }
    }
  return LatticeOperator(M, std::move(mat), {"multiplication", ctx.theta, ctx.tau, margin});
}

LatticeOperator build_cauchy_riemann(SymbolContext ctx, const AlgebraElement& alpha, int M) {
  LatticeOperator d = build_dbar(ctx, M);
  LatticeOperator mul = build_multiplication(ctx, alpha, M);
  return LatticeOperator(M, d.matrix() + mul.matrix(),
                         {"cauchy_riemann", ctx.theta, ctx.tau, mul.meta().boundary_margin});
}

LatticeOperator build_laplacian(SymbolContext ctx, const AlgebraElement& alpha, int M) {
  LatticeOperator d = build_cauchy_riemann(ctx, alpha, M);
  return LatticeOperator(M, d.matrix().adjoint() * d.matrix(),
                         {"laplacian", ctx.theta, ctx.tau, d.meta().boundary_margin});
}

AlgebraElement apply_symbol_op(const OperatorSymbol& sigma, const AlgebraElement& a,
                               const QuadratureConfig* chi) {
  const SymbolContext& ctx = sigma.context();
  if (a.theta() != ctx.theta) throw std::invalid_argument("apply_symbol_op: theta mismatch");
  if (!sigma.is_exact() && chi == nullptr)
    throw std::invalid_argument(
        "apply_symbol_op: truncated representative needs a regularizing cut-off");
  AlgebraElement out(ctx.theta);
  for (const auto& [mode, amp] : a.coeffs()) {
    double weight = 1.0;
    if (chi) weight = chi_cutoff(std::hypot(double(mode.first), double(mode.second)), *chi);
    if (weight == 0.0) continue;
    AlgebraElement value = sigma.evaluate(double(mode.first), double(mode.second));
    out += (weight * amp) * (value * AlgebraElement::monomial(ctx.theta, mode.first, mode.second));
  }
  return out;
}

namespace {

SweepResult sweep_fit(std::vector<int> Ms, std::vector<Cplx> values, double p) {
  if (p >= -1e-9)
    throw std::invalid_argument("lattice trace sweep requires symbol order below -2");
  SweepResult res;
  res.Ms = std::move(Ms);
  res.values = std::move(values);
  const int rows = int(res.Ms.size());
  if (rows < 2) throw std::invalid_argument("sweep: need at least two box sizes");
  Eigen::MatrixXcd A(rows, 2);
  Eigen::VectorXcd b(rows);
  for (int i = 0; i < rows; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::pow(double(res.Ms[std::size_t(i)]), p);
    b(i) = res.values[std::size_t(i)];
  }
  Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(b);
  res.extrapolated = sol(0);
  res.error_estimate = (A * sol - b).cwiseAbs().maxCoeff() +
                       std::abs(sol(1)) * std::pow(double(res.Ms.back()), p) * 0.5;
  return res;
}

}  // namespace

SweepResult lattice_symbol_trace(const OperatorSymbol& sigma, const QuadratureConfig& chi,
                                 const std::vector<int>& Ms) {
  std::vector<Cplx> values;
  for (int M : Ms) {
    Cplx acc(0.0);
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) {
        double w = sigma.is_exact()
                       ? 1.0
                       : chi_cutoff(std::hypot(double(m), double(n)), chi);
        if (w == 0.0) continue;
        acc += w * trace_phi0(sigma.evaluate(double(m), double(n)));
      }
    values.push_back(acc);
  }
  return sweep_fit(Ms, std::move(values), sigma.order().real() + 2.0);
}

SweepResult lattice_radial_trace(const std::function<double(double)>& f, Cplx order,
                                 const AlgebraElement& coefficient, const std::vector<int>& Ms) {
  const Cplx c0 = trace_phi0(coefficient);
  std::vector<Cplx> values;
  for (int M : Ms) {
    double acc = 0.0;
    for (int m = -M; m <= M; ++m)
      for (int n = -M; n <= M; ++n) acc += f(std::hypot(double(m), double(n)));
    values.push_back(c0 * acc);
  }
  return sweep_fit(Ms, std::move(values), order.real() + 2.0);
}

Cplx spectral_function_trace(const LatticeOperator& A, const LatticeOperator& delta,
                             const std::function<Cplx(double)>& f, double eigen_floor) {
  if (A.M() != delta.M()) throw std::invalid_argument("spectral trace: box size mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta.matrix());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectral trace: eigendecomposition failed");
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  Cplx acc(0.0);
  for (int i = 0; i < vals.size(); ++i) {
    if (vals(i) <= eigen_floor) continue;  // kernel modes excluded
    Eigen::VectorXcd v = vecs.col(i);
    acc += f(vals(i)) * (v.adjoint() * A.matrix() * v)(0);
  }
  return acc;
}

SweepResult spectral_function_trace_sweep(SymbolContext ctx, const AlgebraElement& a,
                                          const AlgebraElement& alpha,
                                          const std::function<Cplx(double)>& f, Cplx order,
                                          const std::vector<int>& Ms) {
  std::vector<Cplx> values;
  for (int M : Ms) {
    LatticeOperator mul = build_multiplication(ctx, a, M);
    LatticeOperator delta = build_laplacian(ctx, alpha, M);
    values.push_back(spectral_function_trace(mul, delta, f));
  }
  return sweep_fit(Ms, std::move(values), order.real() + 2.0);
}

InvertibilityCertificate check_invertibility(SymbolContext ctx, const AlgebraElement& alpha,
                                             const std::vector<int>& Ms, double threshold) {
  InvertibilityCertificate cert;
  cert.Ms = Ms;
  cert.threshold = threshold;
  for (int M : Ms) {
    LatticeOperator delta = build_laplacian(ctx, alpha, M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta.matrix(),
                                                       Eigen::EigenvaluesOnly);
    double lmin = std::max(es.eigenvalues().minCoeff(), 0.0);
    cert.sigma_min.push_back(std::sqrt(lmin));
  }
  bool above = true;
  for (double s : cert.sigma_min) above = above && s >= threshold;
  bool stable = cert.sigma_min.back() >= 0.5 * cert.sigma_min.front();
  cert.certified = above && stable;
  return cert;
}

KernelInfo lattice_kernel(SymbolContext ctx, const AlgebraElement& alpha, int M, double cut) {
  LatticeOperator delta = build_laplacian(ctx, alpha, M);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(delta.matrix());
  KernelInfo info;
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  for (int i = 0; i < vals.size(); ++i) {
    if (vals(i) > cut) continue;
    Eigen::Index arg;
    vecs.col(i).cwiseAbs().maxCoeff(&arg);
    int m = int(arg) / (2 * M + 1) - M;
    int n = int(arg) % (2 * M + 1) - M;
    info.modes.emplace_back(m, n);
  }
  return info;
}

}  // namespace nctsym
