#include "nctsym/coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "nctsym/algebra.hpp"

namespace nctsym {

ZPoly zpoly_add(const ZPoly& p, const ZPoly& q) {
  ZPoly r(std::max(p.size(), q.size()), Cplx(0.0));
  for (std::size_t i = 0; i < p.size(); ++i) r[i] += p[i];
  for (std::size_t i = 0; i < q.size(); ++i) r[i] += q[i];
  while (!r.empty() && r.back() == Cplx(0.0)) r.pop_back();
  return r;
}

ZPoly zpoly_mul(const ZPoly& p, const ZPoly& q) {
  if (p.empty() || q.empty()) return {};
  ZPoly r(p.size() + q.size() - 1, Cplx(0.0));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  while (!r.empty() && r.back() == Cplx(0.0)) r.pop_back();
  return r;
}

ZPoly zpoly_scale(const ZPoly& p, Cplx s) {
  if (s == Cplx(0.0)) return {};
  ZPoly r = p;
  for (auto& c : r) c *= s;
  return r;
}

ZPoly zpoly_derivative(const ZPoly& p) {
  if (p.size() <= 1) return {};
  ZPoly r(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = p[i] * Cplx(double(i));
  return r;
}

ZPoly zpoly_shift(const ZPoly& p, int s) {
  // p(z + s) via Horner in (z + s)
  ZPoly r;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    r = zpoly_mul(r, ZPoly{Cplx(double(s)), Cplx(1.0)});
    r = zpoly_add(r, ZPoly{*it});
  }
  return r;
}

Cplx zpoly_eval(const ZPoly& p, Cplx z) {
  Cplx acc(0.0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double zpoly_max_abs(const ZPoly& p) {
  double m = 0.0;
  for (const auto& c : p) m = std::max(m, std::abs(c));
  return m;
}

void CoefficientFunction::require_upper(Cplx tau) {
  if (tau.imag() <= 0.0)
    throw std::invalid_argument("CoefficientFunction: tau must satisfy Im(tau) > 0");
}

CoefficientFunction::CoefficientFunction(Cplx tau, std::vector<CoeffTerm> terms)
    : tau_(tau), terms_(std::move(terms)) {
  require_upper(tau);
  normalize();
}

CoefficientFunction CoefficientFunction::from_term(Cplx tau, CoeffTerm t) {
  return CoefficientFunction(tau, std::vector<CoeffTerm>{std::move(t)});
}

CoefficientFunction CoefficientFunction::constant(Cplx tau, Cplx c) {
  CoeffTerm t;
  t.zc = {c};
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::monomial(Cplx tau, Cplx c, int a, int b) {
  if (a < 0 || b < 0) throw std::invalid_argument("monomial exponents must be nonnegative");
  CoeffTerm t;
  t.zc = {c};
  t.a = a;
  t.b = b;
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::ell(Cplx tau, int power) {
  CoeffTerm t;
  t.el = power;
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::ellbar(Cplx tau, int power) {
  CoeffTerm t;
  t.elb = power;
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::rho(Cplx tau, int power) {
  CoeffTerm t;
  t.er = power;
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::g_power(Cplx tau, int power) {
  CoeffTerm t;
  t.el = power;
  t.elb = power;
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::lambda(Cplx tau, int power) {
  CoeffTerm t;
  t.pLam = power;
  return from_term(tau, t);
}

CoefficientFunction CoefficientFunction::log_norm(Cplx tau, int power) {
  CoeffTerm t;
  t.pL0 = power;
  return from_term(tau, t);
}

bool CoefficientFunction::has_z() const {
  for (const auto& t : terms_)
    if (t.zflag || t.zc.size() > 1) return true;
  return false;
}

bool CoefficientFunction::has_log() const {
  for (const auto& t : terms_)
    if (t.pLam > 0 || t.pL0 > 0) return true;
  return false;
}

int CoefficientFunction::max_pL0() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.pL0);
  return m;
}

double CoefficientFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, zpoly_max_abs(t.zc));
  return m;
}

bool CoefficientFunction::is_polynomial() const {
  for (const auto& t : terms_)
    if (t.el < 0 || t.elb < 0 || t.er < 0 || t.pLam > 0 || t.pL0 > 0 || t.zflag ||
        t.gs != Cplx(0.0) || t.zc.size() > 1)
      return false;
  return true;
}

namespace {
using Signature = std::tuple<int, int, int, int, int, int, int, bool, double, double>;
Signature signature_of(const CoeffTerm& t) {
  return {t.a, t.b, t.el, t.elb, t.er, t.pLam, t.pL0, t.zflag, t.gs.real(), t.gs.imag()};
}
}  // namespace

void CoefficientFunction::normalize() {
  const bool tau_is_i = (tau_ == Cplx(0.0, 1.0));
  std::map<Signature, ZPoly> merged;
  for (auto& t : terms_) {
    if (t.a < 0 || t.b < 0 || t.pLam < 0 || t.pL0 < 0)
      throw std::invalid_argument("CoeffTerm: invalid exponent");
    if (tau_is_i && t.pLam > 0) continue;  // g == rho, so Lam vanishes identically
    auto& acc = merged[signature_of(t)];
    acc = zpoly_add(acc, t.zc);
  }
  std::vector<CoeffTerm> out;
  double mx = 0.0;
  for (const auto& [sig, zc] : merged) mx = std::max(mx, zpoly_max_abs(zc));
  double cut = AlgebraElement::prune_threshold() * mx;
  for (const auto& [sig, zc] : merged) {
    if (zc.empty() || zpoly_max_abs(zc) <= cut) continue;
    CoeffTerm t;
    t.a = std::get<0>(sig);
    t.b = std::get<1>(sig);
    t.el = std::get<2>(sig);
    t.elb = std::get<3>(sig);
    t.er = std::get<4>(sig);
    t.pLam = std::get<5>(sig);
    t.pL0 = std::get<6>(sig);
    t.zflag = std::get<7>(sig);
    t.gs = Cplx(std::get<8>(sig), std::get<9>(sig));
    t.zc = zc;
    out.push_back(std::move(t));
  }
  terms_ = std::move(out);
}

CoefficientFunction& CoefficientFunction::operator+=(const CoefficientFunction& rhs) {
  if (tau_ != rhs.tau_) throw std::invalid_argument("CoefficientFunction: tau mismatch");
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  normalize();
  return *this;
}

CoefficientFunction& CoefficientFunction::operator-=(const CoefficientFunction& rhs) {
  *this += Cplx(-1.0) * rhs;
  return *this;
}

CoefficientFunction operator+(CoefficientFunction f, const CoefficientFunction& g) {
  return f += g;
}

CoefficientFunction operator-(CoefficientFunction f, const CoefficientFunction& g) {
  return f -= g;
}

CoefficientFunction operator*(Cplx s, CoefficientFunction f) {
  std::vector<CoeffTerm> terms = f.terms();
  for (auto& t : terms) t.zc = zpoly_scale(t.zc, s);
  return CoefficientFunction(f.tau(), std::move(terms));
}

CoefficientFunction operator*(CoefficientFunction f, Cplx s) { return s * f; }

CoefficientFunction operator*(const CoefficientFunction& f, const CoefficientFunction& g) {
  if (f.tau() != g.tau()) throw std::invalid_argument("CoefficientFunction: tau mismatch");
  std::vector<CoeffTerm> out;
  out.reserve(f.terms().size() * g.terms().size());
  for (const auto& s : f.terms())
    for (const auto& t : g.terms()) {
      if (s.zflag && t.zflag)
        throw std::invalid_argument("CoefficientFunction: product of two g^z factors");
      CoeffTerm r;
      r.zc = zpoly_mul(s.zc, t.zc);
      r.a = s.a + t.a;
      r.b = s.b + t.b;
      r.el = s.el + t.el;
      r.elb = s.elb + t.elb;
      r.er = s.er + t.er;
      r.pLam = s.pLam + t.pLam;
      r.pL0 = s.pL0 + t.pL0;
      r.zflag = s.zflag || t.zflag;
      r.gs = s.gs + t.gs;
      out.push_back(std::move(r));
    }
  return CoefficientFunction(f.tau(), std::move(out));
}

CoefficientFunction CoefficientFunction::partial(int axis) const {
  if (axis != 1 && axis != 2) throw std::invalid_argument("partial: axis must be 1 or 2");
  const Cplx dl = (axis == 1) ? Cplx(1.0) : tau_;
  const Cplx dlb = (axis == 1) ? Cplx(1.0) : std::conj(tau_);
  std::vector<CoeffTerm> out;
  auto push = [&out](CoeffTerm t, Cplx factor) {
    t.zc = zpoly_scale(t.zc, factor);
    if (!t.zc.empty()) out.push_back(std::move(t));
  };
  for (const auto& t : terms_) {
    // d(xi_i^k)
    if (axis == 1 && t.a > 0) {
      CoeffTerm r = t;
      r.a -= 1;
      push(r, Cplx(double(t.a)));
    }
    if (axis == 2 && t.b > 0) {
      CoeffTerm r = t;
      r.b -= 1;
      push(r, Cplx(double(t.b)));
    }
    // d(l^el), d(lb^elb), d(rho^er)
    if (t.el != 0) {
      CoeffTerm r = t;
      r.el -= 1;
      push(r, Cplx(double(t.el)) * dl);
    }
    if (t.elb != 0) {
      CoeffTerm r = t;
      r.elb -= 1;
      push(r, Cplx(double(t.elb)) * dlb);
    }
    if (t.er != 0) {
      CoeffTerm r = t;
      r.er -= 1;
      if (axis == 1)
        r.a += 1;
      else
        r.b += 1;
      push(r, Cplx(2.0 * t.er));
    }
    // d(Lam^p): p Lam^{p-1} (dl/l + dlb/lb - 2 xi_i / rho)
    if (t.pLam > 0) {
      CoeffTerm r1 = t;
      r1.pLam -= 1;
      r1.el -= 1;
      push(r1, Cplx(double(t.pLam)) * dl);
      CoeffTerm r2 = t;
      r2.pLam -= 1;
      r2.elb -= 1;
      push(r2, Cplx(double(t.pLam)) * dlb);
      CoeffTerm r3 = t;
      r3.pLam -= 1;
      r3.er -= 1;
      if (axis == 1)
        r3.a += 1;
      else
        r3.b += 1;
      push(r3, Cplx(-2.0 * t.pLam));
    }
    // d(L0^p): p L0^{p-1} xi_i / rho
    if (t.pL0 > 0) {
      CoeffTerm r = t;
      r.pL0 -= 1;
      r.er -= 1;
      if (axis == 1)
        r.a += 1;
      else
        r.b += 1;
      push(r, Cplx(double(t.pL0)));
    }
    // d(g^gs): gs (dl/l + dlb/lb) g^gs
    if (t.gs != Cplx(0.0)) {
      CoeffTerm r1 = t;
      r1.el -= 1;
      push(r1, t.gs * dl);
      CoeffTerm r2 = t;
      r2.elb -= 1;
      push(r2, t.gs * dlb);
    }
    // d(g^z): z (dl/l + dlb/lb) g^z
    if (t.zflag) {
      CoeffTerm r1 = t;
      r1.el -= 1;
      r1.zc = zpoly_mul(t.zc, ZPoly{Cplx(0.0), dl});
      out.push_back(std::move(r1));
      CoeffTerm r2 = t;
      r2.elb -= 1;
      r2.zc = zpoly_mul(t.zc, ZPoly{Cplx(0.0), dlb});
      out.push_back(std::move(r2));
    }
  }
  return CoefficientFunction(tau_, std::move(out));
}

CoefficientFunction CoefficientFunction::dz() const {
  std::vector<CoeffTerm> out;
  for (const auto& t : terms_) {
    ZPoly dc = zpoly_derivative(t.zc);
    if (!dc.empty()) {
      CoeffTerm r = t;
      r.zc = std::move(dc);
      out.push_back(std::move(r));
    }
    if (t.zflag) {  // log g = Lam + 2 L0
      CoeffTerm r1 = t;
      r1.pLam += 1;
      out.push_back(std::move(r1));
      CoeffTerm r2 = t;
      r2.pL0 += 1;
      r2.zc = zpoly_scale(t.zc, 2.0);
      out.push_back(std::move(r2));
    }
  }
  return CoefficientFunction(tau_, std::move(out));
}

CoefficientFunction CoefficientFunction::dz_at_zero() const {
  if (!has_z()) throw std::invalid_argument("dz_at_zero: input carries no z dependence");
  return dz().substitute_z(0);
}

CoefficientFunction CoefficientFunction::substitute_z(int z0) const {
  std::vector<CoeffTerm> out;
  for (const auto& t : terms_) {
    CoeffTerm r = t;
    r.zc = {zpoly_eval(t.zc, Cplx(double(z0)))};
    if (t.zflag) {
      r.zflag = false;
      r.el += z0;
      r.elb += z0;
    }
    out.push_back(std::move(r));
  }
  return CoefficientFunction(tau_, std::move(out));
}

CoefficientFunction CoefficientFunction::substitute_z(Cplx z0) const {
  std::vector<CoeffTerm> out;
  for (const auto& t : terms_) {
    CoeffTerm r = t;
    r.zc = {zpoly_eval(t.zc, z0)};
    if (t.zflag) {
      r.zflag = false;
      r.gs += z0;
    }
    out.push_back(std::move(r));
  }
  return CoefficientFunction(tau_, std::move(out));
}

CoefficientFunction CoefficientFunction::shift_z(int s) const {
  std::vector<CoeffTerm> out;
  for (const auto& t : terms_) {
    CoeffTerm r = t;
    r.zc = zpoly_shift(t.zc, s);
    if (t.zflag) {  // g^{z+s} = g^z g^s
      r.el += s;
      r.elb += s;
    }
    out.push_back(std::move(r));
  }
  return CoefficientFunction(tau_, std::move(out));
}

CoefficientFunction CoefficientFunction::conj_fn() const {
  if (has_z())
    throw std::invalid_argument("conj_fn: not defined for symbolic-z coefficients");
  std::vector<CoeffTerm> out;
  for (const auto& t : terms_) {
    CoeffTerm r = t;
    std::swap(r.el, r.elb);
    r.gs = std::conj(t.gs);
    r.zc = {std::conj(t.zc.empty() ? Cplx(0.0) : t.zc[0])};
    out.push_back(std::move(r));
  }
  return CoefficientFunction(tau_, std::move(out));
}

CoefficientFunction CoefficientFunction::strip_L0() const {
  std::vector<CoeffTerm> out = terms_;
  for (auto& t : out) t.pL0 = 0;
  return CoefficientFunction(tau_, std::move(out));
}

std::vector<std::pair<int, CoefficientFunction>> CoefficientFunction::split_by_L0() const {
  std::map<int, std::vector<CoeffTerm>> buckets;
  for (const auto& t : terms_) buckets[t.pL0].push_back(t);
  std::vector<std::pair<int, CoefficientFunction>> out;
  for (auto& [l, ts] : buckets)
    out.emplace_back(l, CoefficientFunction(tau_, std::move(ts)));
  return out;
}

Cplx CoefficientFunction::evaluate(double xi1, double xi2, std::optional<Cplx> z) const {
  const Cplx l = Cplx(xi1) + tau_ * Cplx(xi2);
  const Cplx lb = Cplx(xi1) + std::conj(tau_) * Cplx(xi2);
  const double rho = xi1 * xi1 + xi2 * xi2;
  const double g = (l * lb).real();  // real and positive off the origin

  Cplx acc(0.0);
  for (const auto& t : terms_) {
    const bool needs_l = t.el < 0 || t.pLam > 0 || t.gs != Cplx(0.0) || t.zflag;
    const bool needs_rho = t.er < 0 || t.pLam > 0 || t.pL0 > 0;
    if ((needs_l && std::abs(l) < 1e-300) || (needs_rho && rho < 1e-300) ||
        ((t.elb < 0 || t.pLam > 0 || t.gs != Cplx(0.0) || t.zflag) && std::abs(lb) < 1e-300))
      throw std::domain_error("CoefficientFunction: evaluation at a zero of l, lb or rho");
    Cplx v = t.zc.size() == 1 ? t.zc[0] : Cplx(0.0);
    if (t.zc.size() != 1 || t.zflag) {
      if (!z.has_value())
        throw std::invalid_argument("CoefficientFunction: z value required for evaluation");
      v = zpoly_eval(t.zc, *z);
    }
    if (t.a) v *= ipow(Cplx(xi1), t.a);
    if (t.b) v *= ipow(Cplx(xi2), t.b);
    if (t.el) v *= ipow(l, t.el);
    if (t.elb) v *= ipow(lb, t.elb);
    if (t.er) v *= ipow(Cplx(rho), t.er);
    if (t.pLam) v *= ipow(Cplx(std::log(g) - std::log(rho)), t.pLam);
    if (t.pL0) v *= ipow(Cplx(0.5 * std::log(rho)), t.pL0);
    if (t.gs != Cplx(0.0)) v *= std::exp(t.gs * std::log(g));
    if (t.zflag) v *= std::exp(*z * std::log(g));
    acc += v;
  }
  return acc;
}

}  // namespace nctsym
