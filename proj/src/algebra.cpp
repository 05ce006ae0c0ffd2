#include "nctsym/algebra.hpp"

#include <atomic>
#include <cmath>

namespace nctsym {

namespace {
std::atomic<double> g_prune_rel{1e-15};
}

double AlgebraElement::prune_threshold() { return g_prune_rel.load(); }
void AlgebraElement::set_prune_threshold(double rel) { g_prune_rel.store(rel); }

AlgebraElement::AlgebraElement(double theta, CoeffMap coeffs)
    : theta_(theta), coeffs_(std::move(coeffs)) {
  prune();
}

AlgebraElement AlgebraElement::unit(double theta, Cplx amp) {
  return monomial(theta, 0, 0, amp);
}

AlgebraElement AlgebraElement::monomial(double theta, int m, int n, Cplx amp) {
  AlgebraElement a(theta);
  if (amp != Cplx(0.0)) a.coeffs_[{m, n}] = amp;
  return a;
}

int AlgebraElement::max_mode() const {
  int mm = 0;
  for (const auto& [k, v] : coeffs_) {
    (void)v;
    mm = std::max({mm, std::abs(k.first), std::abs(k.second)});
  }
  return mm;
}

Cplx AlgebraElement::coeff(int m, int n) const {
  auto it = coeffs_.find({m, n});
  return it == coeffs_.end() ? Cplx(0.0) : it->second;
}

double AlgebraElement::max_abs() const {
  double mx = 0.0;
  for (const auto& [k, v] : coeffs_) {
    (void)k;
    mx = std::max(mx, std::abs(v));
  }
  return mx;
}

double AlgebraElement::l1_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : coeffs_) {
    (void)k;
    s += std::abs(v);
  }
  return s;
}

void AlgebraElement::require_same_theta(const AlgebraElement& other) const {
  if (theta_ != other.theta_)
    throw std::invalid_argument("AlgebraElement: theta mismatch between operands");
}

void AlgebraElement::prune(double rel) {
  double cut = rel * max_abs();
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) <= cut)
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  require_same_theta(rhs);
  for (const auto& [k, v] : rhs.coeffs_) coeffs_[k] += v;
  prune();
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  require_same_theta(rhs);
  for (const auto& [k, v] : rhs.coeffs_) coeffs_[k] -= v;
  prune();
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Cplx s) {
  for (auto& [k, v] : coeffs_) {
    (void)k;
    v *= s;
  }
  prune();
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(Cplx s, AlgebraElement a) { return a *= s; }
AlgebraElement operator*(AlgebraElement a, Cplx s) { return a *= s; }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_same_theta(b);
  AlgebraElement out(a.theta());
  // (U^m V^n)(U^p V^q) = e^{2 pi i theta n p} U^{m+p} V^{n+q}
  for (const auto& [ka, va] : a.coeffs()) {
    for (const auto& [kb, vb] : b.coeffs()) {
      Cplx phase = unit_phase(a.theta(), static_cast<long long>(ka.second) * kb.first);
      out.coeffs_[{ka.first + kb.first, ka.second + kb.second}] += va * vb * phase;
    }
  }
  out.prune();
  return out;
}

AlgebraElement adjoint(const AlgebraElement& a) {
  AlgebraElement out(a.theta());
  AlgebraElement::CoeffMap m;
  for (const auto& [k, v] : a.coeffs()) {
    Cplx phase = unit_phase(a.theta(), static_cast<long long>(k.first) * k.second);
    m[{-k.first, -k.second}] = std::conj(v) * phase;
  }
  return AlgebraElement(a.theta(), std::move(m));
}

Cplx trace_phi0(const AlgebraElement& a) { return a.coeff(0, 0); }

Cplx inner_product(const AlgebraElement& a, const AlgebraElement& b) {
  return trace_phi0(adjoint(b) * a);
}

AlgebraElement derive(const AlgebraElement& a, Derivation which, Cplx tau) {
  if ((which == Derivation::dbar || which == Derivation::dbar_star) && tau.imag() <= 0.0)
    throw std::invalid_argument("derive: dbar requires Im(tau) > 0");
  AlgebraElement::CoeffMap m;
  for (const auto& [k, v] : a.coeffs()) {
    Cplx factor;
    switch (which) {
      case Derivation::delta1: factor = Cplx(k.first); break;
      case Derivation::delta2: factor = Cplx(k.second); break;
      case Derivation::dbar: factor = Cplx(k.first) + tau * Cplx(k.second); break;
      case Derivation::dbar_star: factor = Cplx(k.first) + std::conj(tau) * Cplx(k.second); break;
    }
    Cplx w = factor * v;
    if (w != Cplx(0.0)) m[k] = w;
  }
  return AlgebraElement(a.theta(), std::move(m));
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
  double mx = 0.0;
  for (const auto& [k, v] : a.coeffs()) mx = std::max(mx, std::abs(v - b.coeff(k.first, k.second)));
  for (const auto& [k, v] : b.coeffs()) mx = std::max(mx, std::abs(v - a.coeff(k.first, k.second)));
  return mx;
}

bool approx_equal(const AlgebraElement& a, const AlgebraElement& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

}  // namespace nctsym
