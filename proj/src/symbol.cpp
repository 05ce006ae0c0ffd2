#include "nctsym/symbol.hpp"

#include <algorithm>
#include <cmath>

namespace nctsym {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// m^p for small integer m, p >= 0.
double int_pow(int m, int p) {
  double acc = 1.0;
  for (int i = 0; i < p; ++i) acc *= m;
  return acc;
}

CoefficientFunction& component_at(Component& c, int m, int n, Cplx tau) {
  auto it = c.find({m, n});
  if (it == c.end())
    it = c.emplace(std::make_pair(m, n), CoefficientFunction::zero(tau)).first;
  return it->second;
}

void component_cleanup(Component& c) {
  for (auto it = c.begin(); it != c.end();)
    it = it->second.is_zero() ? c.erase(it) : std::next(it);
}

Component component_partial(const Component& c, int axis) {
  Component out;
  for (const auto& [mode, f] : c) {
    CoefficientFunction d = f.partial(axis);
    if (!d.is_zero()) out.emplace(mode, std::move(d));
  }
  return out;
}

// Table of d1^{g1} d2^{g2} applied to a component, filled on demand.
class PartialTable {
public:
  explicit PartialTable(const Component& base) { rows_.push_back({base}); }

  const Component& get(int g1, int g2) {
    while (int(rows_.size()) <= g1) {
      rows_.push_back({component_partial(rows_.back()[0], 1)});
    }
    auto& row = rows_[g1];
    while (int(row.size()) <= g2) row.push_back(component_partial(row.back(), 2));
    return row[g2];
  }

private:
  std::vector<std::vector<Component>> rows_;
};

int component_poly_degree(const Component& c) {
  int deg = 0;
  for (const auto& [mode, f] : c) {
    (void)mode;
    for (const auto& t : f.terms())
      deg = std::max(deg, t.a + t.b + t.el + t.elb + 2 * t.er);
  }
  return deg;
}

}  // namespace

Component component_add(Component a, const Component& b) {
  for (const auto& [mode, f] : b) {
    auto it = a.find(mode);
    if (it == a.end())
      a.emplace(mode, f);
    else
      it->second += f;
  }
  component_cleanup(a);
  return a;
}

Component component_scale(Component a, Cplx s) {
  for (auto& [mode, f] : a) {
    (void)mode;
    f = f * s;
  }
  component_cleanup(a);
  return a;
}

bool component_is_zero(const Component& c) {
  for (const auto& [mode, f] : c)
    if (!f.is_zero()) return false;
  return true;
}

AlgebraElement evaluate_component(const Component& c, double theta, double xi1, double xi2,
                                  std::optional<Cplx> z) {
  AlgebraElement out(theta);
  for (const auto& [mode, f] : c)
    out += AlgebraElement::monomial(theta, mode.first, mode.second, f.evaluate(xi1, xi2, z));
  return out;
}

OperatorSymbol OperatorSymbol::multiplication(SymbolContext ctx, const AlgebraElement& a) {
  OperatorSymbol s(ctx, 0.0, kExact);
  for (const auto& [mode, amp] : a.coeffs())
    s.deposit(0, mode.first, mode.second, CoefficientFunction::constant(ctx.tau, amp));
  return s;
}

OperatorSymbol OperatorSymbol::dbar(SymbolContext ctx) {
  return cauchy_riemann(ctx, AlgebraElement::zero(ctx.theta));
}

OperatorSymbol OperatorSymbol::cauchy_riemann(SymbolContext ctx, const AlgebraElement& alpha) {
  if (alpha.theta() != ctx.theta)
    throw std::invalid_argument("cauchy_riemann: alpha theta differs from context");
  OperatorSymbol s(ctx, 1.0, kExact);
  s.deposit(0, 0, 0, CoefficientFunction::ell(ctx.tau));
  for (const auto& [mode, amp] : alpha.coeffs())
    s.deposit(1, mode.first, mode.second, CoefficientFunction::constant(ctx.tau, amp));
  return s;
}

void OperatorSymbol::deposit(int j, int m, int n, const CoefficientFunction& f) {
  if (j >= trunc_ || f.is_zero()) return;
  for (const auto& [l, sub] : f.split_by_L0()) {
    auto& comp = comps_[{j, l}];
    component_at(comp, m, n, ctx_.tau) += sub;
    component_cleanup(comp);
  }
  for (auto it = comps_.begin(); it != comps_.end();)
    it = it->second.empty() ? comps_.erase(it) : std::next(it);
}

void OperatorSymbol::deposit(int j, const Component& c) {
  for (const auto& [mode, f] : c) deposit(j, mode.first, mode.second, f);
}

Component OperatorSymbol::homogeneous_component(Cplx degree, int logpower) const {
  Cplx joff = order_ - degree;
  if (std::abs(joff.imag()) > 1e-9 || !near_integer(joff.real()) || joff.real() < -0.5)
    return {};
  int j = int(std::lround(joff.real()));
  if (j >= trunc_)
    throw std::domain_error("homogeneous_component: requested degree below truncation depth");
  auto it = comps_.find({j, logpower});
  return it == comps_.end() ? Component{} : it->second;
}

Component OperatorSymbol::homogeneous_coefficient(Cplx degree, int logpower) const {
  Component c = homogeneous_component(degree, logpower);
  Component out;
  for (const auto& [mode, f] : c) out.emplace(mode, f.strip_L0());
  return out;
}

bool OperatorSymbol::all_polynomial() const {
  for (const auto& [key, comp] : comps_) {
    if (key.second != 0) return false;
    for (const auto& [mode, f] : comp) {
      (void)mode;
      if (!f.is_polynomial()) return false;
    }
  }
  return true;
}

bool OperatorSymbol::all_central() const {
  for (const auto& [key, comp] : comps_) {
    (void)key;
    for (const auto& [mode, f] : comp) {
      (void)f;
      if (mode != std::pair<int, int>{0, 0}) return false;
    }
  }
  return true;
}

int OperatorSymbol::max_offset() const {
  int m = -1;
  for (const auto& [key, comp] : comps_) {
    (void)comp;
    m = std::max(m, key.first);
  }
  return m;
}

int OperatorSymbol::max_logpower() const {
  int m = 0;
  for (const auto& [key, comp] : comps_) {
    (void)comp;
    m = std::max(m, key.second);
  }
  return m;
}

AlgebraElement OperatorSymbol::evaluate(double xi1, double xi2, std::optional<Cplx> z) const {
  AlgebraElement out(ctx_.theta);
  for (const auto& [key, comp] : comps_) {
    (void)key;
    out += evaluate_component(comp, ctx_.theta, xi1, xi2, z);
  }
  return out;
}

void OperatorSymbol::check_grading(double tol) const {
  for (const auto& [key, comp] : comps_) {
    for (const auto& [mode, f] : comp) {
      (void)mode;
      for (const auto& t : f.terms()) {
        if (t.zflag) throw std::logic_error("OperatorSymbol: unexpected symbolic z factor");
        if (t.pL0 != key.second) throw std::logic_error("OperatorSymbol: log power out of bucket");
        Cplx want = order_ - Cplx(double(key.first));
        if (std::abs(t.degree_no_z() - want) > tol)
          throw std::logic_error("OperatorSymbol: inhomogeneous term in graded component");
      }
    }
  }
}

OperatorSymbol& OperatorSymbol::operator+=(const OperatorSymbol& rhs) {
  if (!(ctx_ == rhs.ctx_)) throw std::invalid_argument("OperatorSymbol: context mismatch");
  if (std::abs(order_ - rhs.order_) > 1e-12)
    throw std::invalid_argument("OperatorSymbol: order mismatch in sum");
  trunc_ = std::min(trunc_, rhs.trunc_);
  for (const auto& [key, comp] : rhs.comps_) {
    if (key.first >= trunc_) continue;
    for (const auto& [mode, f] : comp) {
      auto& mine = comps_[key];
      component_at(mine, mode.first, mode.second, ctx_.tau) += f;
    }
  }
  for (auto& [key, comp] : comps_) {
    (void)key;
    component_cleanup(comp);
  }
  for (auto it = comps_.begin(); it != comps_.end();)
    it = (it->second.empty() || it->first.first >= trunc_) ? comps_.erase(it) : std::next(it);
  return *this;
}

OperatorSymbol& OperatorSymbol::operator*=(Cplx s) {
  for (auto& [key, comp] : comps_) {
    (void)key;
    comp = component_scale(std::move(comp), s);
  }
  return *this;
}

OperatorSymbol operator+(OperatorSymbol a, const OperatorSymbol& b) { return a += b; }

OperatorSymbol operator-(OperatorSymbol a, const OperatorSymbol& b) {
  OperatorSymbol nb = b;
  nb *= Cplx(-1.0);
  return a += nb;
}

OperatorSymbol operator*(Cplx s, OperatorSymbol a) {
  a *= s;
  return a;
}

OperatorSymbol from_differential(SymbolContext ctx,
                                 const std::map<std::pair<int, int>, AlgebraElement>& coeffs) {
  int order = 0;
  for (const auto& [jj, a] : coeffs)
    if (!a.is_zero()) order = std::max(order, jj.first + jj.second);
  OperatorSymbol s(ctx, double(order), OperatorSymbol::kExact);
  for (const auto& [jj, a] : coeffs) {
    if (a.theta() != ctx.theta)
      throw std::invalid_argument("from_differential: coefficient theta differs from context");
    int deg = jj.first + jj.second;
    for (const auto& [mode, amp] : a.coeffs())
      s.deposit(order - deg, mode.first, mode.second,
                CoefficientFunction::monomial(ctx.tau, amp, jj.first, jj.second));
  }
  return s;
}

OperatorSymbol star_product(const OperatorSymbol& p, const OperatorSymbol& q, int depth) {
  if (!(p.context() == q.context()))
    throw std::invalid_argument("star_product: context mismatch");
  const double theta = p.context().theta;

  const bool p_poly = p.all_polynomial();
  const bool exact = p.is_exact() && q.is_exact() && (p_poly || q.all_central());
  const int avail = std::min(p.trunc(), q.trunc());
  if (!exact && depth > avail)
    throw std::invalid_argument("star_product: requested depth exceeds input validity");
  const int nout = exact ? OperatorSymbol::kExact : std::min(depth, avail);

  OperatorSymbol out(p.context(), p.order() + q.order(), nout);

  for (const auto& [keyA, compA] : p.components()) {
    const int jA = keyA.first;
    PartialTable table(compA);
    const int poly_deg = exact && p_poly ? component_poly_degree(compA) : 0;
    for (const auto& [keyB, compB] : q.components()) {
      const int jB = keyB.first;
      int gmax;
      if (exact)
        gmax = p_poly ? poly_deg : 0;
      else
        gmax = nout - 1 - jA - jB;
      for (int gtot = 0; gmax >= 0 && gtot <= gmax; ++gtot) {
        for (int g1 = 0; g1 <= gtot; ++g1) {
          const int g2 = gtot - g1;
          const Component& dA = table.get(g1, g2);
          if (dA.empty()) continue;
          const double invfact = 1.0 / (factorial(g1) * factorial(g2));
          for (const auto& [modeA, fA] : dA) {
            for (const auto& [modeB, fB] : compB) {
              if ((g1 > 0 && modeB.first == 0) || (g2 > 0 && modeB.second == 0)) continue;
              const double delta_factor =
                  int_pow(modeB.first, g1) * int_pow(modeB.second, g2);
              const Cplx phase =
                  unit_phase(theta, static_cast<long long>(modeA.second) * modeB.first);
              CoefficientFunction f = fA * fB;
              f = f * (phase * delta_factor * invfact);
              out.deposit(jA + jB + gtot, modeA.first + modeB.first,
                          modeA.second + modeB.second, f);
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

// Pointwise star of sigma^*: modes flipped with the adjoint phase,
// coefficients conjugated.
Component component_pointwise_adjoint(const Component& c, double theta) {
  Component out;
  for (const auto& [mode, f] : c) {
    Cplx phase = unit_phase(theta, static_cast<long long>(mode.first) * mode.second);
    out.emplace(std::make_pair(-mode.first, -mode.second), f.conj_fn() * phase);
  }
  return out;
}

}  // namespace

OperatorSymbol adjoint_symbol(const OperatorSymbol& p, int depth) {
  const double theta = p.context().theta;
  const bool exact = p.is_exact() && p.all_polynomial();
  if (!exact && depth > p.trunc())
    throw std::invalid_argument("adjoint_symbol: requested depth exceeds input validity");
  const int nout = exact ? OperatorSymbol::kExact : std::min(depth, p.trunc());
  OperatorSymbol out(p.context(), std::conj(p.order()), nout);

  for (const auto& [key, comp] : p.components()) {
    const int j = key.first;
    Component star = component_pointwise_adjoint(comp, theta);
    const int gmax = exact ? component_poly_degree(star) : nout - 1 - j;
    // delta^gamma first (a mode factor), then d^gamma on the coefficient.
    for (const auto& [mode, f] : star) {
      std::vector<std::vector<CoefficientFunction>> table{{f}};
      for (int g1 = 0; g1 <= gmax && gmax >= 0; ++g1) {
        if (g1 > 0 && int(table.size()) <= g1)
          table.push_back({table[g1 - 1][0].partial(1)});
        for (int g2 = 0; g1 + g2 <= gmax; ++g2) {
          if (g2 > 0 && int(table[g1].size()) <= g2)
            table[g1].push_back(table[g1][g2 - 1].partial(2));
          if ((g1 > 0 && mode.first == 0) || (g2 > 0 && mode.second == 0)) continue;
          const double delta_factor = int_pow(mode.first, g1) * int_pow(mode.second, g2);
          if (delta_factor == 0.0) continue;
          CoefficientFunction d = table[g1][g2];
          if (d.is_zero()) continue;
          d = d * Cplx(delta_factor / (factorial(g1) * factorial(g2)));
          out.deposit(j + g1 + g2, mode.first, mode.second, d);
        }
      }
    }
  }
  return out;
}

namespace {

// Inverts a central leading coefficient when it is a single factor-basis
// term or a recognizable multiple of l, lb, g or rho.
CoefficientFunction invert_leading(const CoefficientFunction& f) {
  const Cplx tau = f.tau();
  const auto& ts = f.terms();
  auto bad = [] { return std::invalid_argument("parametrix: leading symbol is not elliptic-invertible"); };
  if (ts.empty()) throw bad();
  for (const auto& t : ts)
    if (t.pLam || t.pL0 || t.zflag || t.zc.size() != 1) throw bad();

  if (ts.size() == 1) {
    const CoeffTerm& t = ts[0];
    if (t.a != 0 || t.b != 0) {
      // try to recognize c*l, c*lb from a pure monomial pair elsewhere; a
      // lone xi monomial is not invertible inside the class
      throw bad();
    }
    CoeffTerm r;
    r.zc = {Cplx(1.0) / t.zc[0]};
    r.el = -t.el;
    r.elb = -t.elb;
    r.er = -t.er;
    r.gs = -t.gs;
    return CoefficientFunction::from_term(tau, r);
  }

  // match c*(xi1 + tau xi2) or c*(xi1 + conj(tau) xi2)
  auto mono = [&](int a, int b) -> Cplx {
    for (const auto& t : ts)
      if (t.a == a && t.b == b && !t.el && !t.elb && !t.er && t.gs == Cplx(0.0)) return t.zc[0];
    return Cplx(0.0);
  };
  if (ts.size() == 2) {
    Cplx c10 = mono(1, 0), c01 = mono(0, 1);
    if (c10 != Cplx(0.0)) {
      if (std::abs(c01 - tau * c10) < 1e-12 * std::abs(c10))
        return CoefficientFunction::ell(tau, -1) * (Cplx(1.0) / c10);
      if (std::abs(c01 - std::conj(tau) * c10) < 1e-12 * std::abs(c10))
        return CoefficientFunction::ellbar(tau, -1) * (Cplx(1.0) / c10);
    }
    Cplx c20 = mono(2, 0), c02 = mono(0, 2);
    if (c20 != Cplx(0.0) && std::abs(c02 - c20) < 1e-12 * std::abs(c20) &&
        std::abs(tau.real()) < 1e-15 && std::abs(std::norm(tau) - 1.0) < 1e-15)
      return CoefficientFunction::rho(tau, -1) * (Cplx(1.0) / c20);
  }
  if (ts.size() == 3) {
    Cplx c20 = mono(2, 0), c11 = mono(1, 1), c02 = mono(0, 2);
    if (c20 != Cplx(0.0) && std::abs(c11 - 2.0 * tau.real() * c20) < 1e-12 * std::abs(c20) &&
        std::abs(c02 - std::norm(tau) * c20) < 1e-12 * std::abs(c20))
      return CoefficientFunction::g_power(tau, -1) * (Cplx(1.0) / c20);
    if (c20 != Cplx(0.0) && std::abs(c11) < 1e-12 * std::abs(c20) &&
        std::abs(c02 - c20) < 1e-12 * std::abs(c20))
      return CoefficientFunction::rho(tau, -1) * (Cplx(1.0) / c20);
  }
  throw bad();
}

const CoefficientFunction* leading_scalar(const OperatorSymbol& p) {
  for (const auto& [key, comp] : p.components()) {
    if (key.first != 0) continue;
    if (key.second != 0)
      throw std::invalid_argument("parametrix: leading term carries a log factor");
    if (comp.size() != 1 || comp.begin()->first != std::pair<int, int>{0, 0})
      throw std::invalid_argument("parametrix: leading symbol is not central");
    return &comp.begin()->second;
  }
  throw std::invalid_argument("parametrix: empty leading component");
}

}  // namespace

OperatorSymbol parametrix(const OperatorSymbol& p, int depth) {
  if (p.max_logpower() != 0)
    throw std::invalid_argument("parametrix: log-polyhomogeneous input not supported");
  if (std::abs(p.order().imag()) > 1e-12 || !near_integer(p.order().real()))
    throw std::invalid_argument("parametrix: order must be an integer");
  const int m = int(std::lround(p.order().real()));
  if (!p.is_exact() && depth > p.trunc())
    throw std::invalid_argument("parametrix: requested depth exceeds input validity");

  const SymbolContext ctx = p.context();
  const double theta = ctx.theta;
  CoefficientFunction q0 = invert_leading(*leading_scalar(p));

  // q_j = -q0 * sum_{k+l+|gamma|=j, l<j} (1/gamma!) d^gamma sigma_{m-k} delta^gamma q_l
  std::vector<Component> q;
  q.push_back(Component{{{0, 0}, q0}});

  std::vector<PartialTable> sigma_tables;
  std::vector<const Component*> sigma_comps(std::size_t(p.max_offset() + 1), nullptr);
  for (const auto& [key, comp] : p.components())
    if (key.second == 0) sigma_comps[std::size_t(key.first)] = &comp;
  for (std::size_t k = 0; k < sigma_comps.size(); ++k)
    sigma_tables.emplace_back(sigma_comps[k] ? *sigma_comps[k] : Component{});

  for (int j = 1; j < depth; ++j) {
    Component acc;
    for (int k = 0; k <= std::min(j, int(sigma_comps.size()) - 1); ++k) {
      if (!sigma_comps[std::size_t(k)]) continue;
      for (int l = 0; l <= j - k && l < j; ++l) {
        const int gtot = j - k - l;
        if (gtot < 0) continue;
        for (int g1 = 0; g1 <= gtot; ++g1) {
          const int g2 = gtot - g1;
          const Component& dS = sigma_tables[std::size_t(k)].get(g1, g2);
          if (dS.empty()) continue;
          const double invfact = 1.0 / (factorial(g1) * factorial(g2));
          for (const auto& [modeA, fA] : dS)
            for (const auto& [modeB, fB] : q[std::size_t(l)]) {
              if ((g1 > 0 && modeB.first == 0) || (g2 > 0 && modeB.second == 0)) continue;
              const double delta_factor = int_pow(modeB.first, g1) * int_pow(modeB.second, g2);
              const Cplx phase =
                  unit_phase(theta, static_cast<long long>(modeA.second) * modeB.first);
              CoefficientFunction f = fA * fB;
              f = f * (phase * delta_factor * invfact);
              component_at(acc, modeA.first + modeB.first, modeA.second + modeB.second,
                           ctx.tau) += f;
            }
        }
      }
    }
    Component qj;
    for (const auto& [mode, f] : acc) {
      CoefficientFunction v = q0 * f * Cplx(-1.0);
      if (!v.is_zero()) qj.emplace(mode, std::move(v));
    }
    q.push_back(std::move(qj));
  }

  // The inverse is exact when the recursion dies out entirely within reach
  // of the last possible source term (polynomial input, all corrections 0).
  bool exact = p.is_exact() && p.all_polynomial();
  if (exact) {
    int max_deg = 0;
    for (const auto& [key, comp] : p.components()) {
      (void)key;
      max_deg = std::max(max_deg, component_poly_degree(comp));
    }
    if (depth <= p.max_offset() + max_deg) exact = false;
    for (int j = 1; j < depth && exact; ++j) exact = q[std::size_t(j)].empty();
  }

  OperatorSymbol out(ctx, double(-m), exact ? OperatorSymbol::kExact : depth);
  for (int j = 0; j < depth; ++j) out.deposit(j, q[std::size_t(j)]);
  return out;
}

namespace {

void require_leading_g(const OperatorSymbol& delta) {
  if (std::abs(delta.order() - Cplx(2.0)) > 1e-12)
    throw std::invalid_argument("resolvent: symbol must have order 2");
  const CoefficientFunction* lead = leading_scalar(delta);
  const auto& ts = lead->terms();
  bool ok = ts.size() == 1 && ts[0].a == 0 && ts[0].b == 0 && ts[0].el == 1 && ts[0].elb == 1 &&
            ts[0].er == 0 && !ts[0].pLam && !ts[0].pL0 && !ts[0].zflag &&
            ts[0].gs == Cplx(0.0) && ts[0].zc.size() == 1 &&
            std::abs(ts[0].zc[0] - Cplx(1.0)) < 1e-12;
  if (!ok) throw std::invalid_argument("resolvent: leading symbol must be g = l*lb");
}

}  // namespace

const std::map<int, Component>& ResolventSymbol::piece(int j) const {
  if (j < 0 || j >= int(comps_.size()))
    throw std::domain_error("ResolventSymbol: component outside computed depth");
  return comps_[std::size_t(j)];
}

void ResolventSymbol::set_piece(int j, std::map<int, Component> piece) {
  if (int(comps_.size()) != j) throw std::logic_error("ResolventSymbol: pieces must be appended in order");
  comps_.push_back(std::move(piece));
}

AlgebraElement ResolventSymbol::evaluate(int j, double xi1, double xi2, Cplx lambda) const {
  const double theta = ctx_.theta;
  AlgebraElement out(theta);
  const Cplx l = Cplx(xi1) + ctx_.tau * Cplx(xi2);
  const Cplx lb = Cplx(xi1) + std::conj(ctx_.tau) * Cplx(xi2);
  const Cplx g = l * lb;
  for (const auto& [k, comp] : piece(j)) {
    Cplx pole = ipow(lambda - g, -k);
    out += pole * evaluate_component(comp, theta, xi1, xi2);
  }
  return out;
}

ResolventSymbol resolvent_expansion(const OperatorSymbol& delta, int depth) {
  require_leading_g(delta);
  if (!delta.is_exact() && depth + 1 > delta.trunc())
    throw std::invalid_argument("resolvent: requested depth exceeds input validity");
  const SymbolContext ctx = delta.context();
  const double theta = ctx.theta;

  std::vector<const Component*> sigma(std::size_t(delta.max_offset() + 1), nullptr);
  for (const auto& [key, comp] : delta.components()) {
    if (key.second != 0) throw std::invalid_argument("resolvent: log-polyhomogeneous input");
    sigma[std::size_t(key.first)] = &comp;
  }
  std::vector<PartialTable> tables;
  for (std::size_t k = 0; k < sigma.size(); ++k)
    tables.emplace_back(sigma[k] ? *sigma[k] : Component{});

  ResolventSymbol out(ctx, depth);
  std::vector<std::map<int, Component>> b;
  b.push_back({{1, Component{{{0, 0}, CoefficientFunction::one(ctx.tau)}}}});
  out.set_piece(0, b[0]);

  // b_j = (lambda-g)^{-1} sum_{k+l+|gamma|=j, l<j} (1/gamma!) d^gamma sigma_{2-k} delta^gamma b_l.
  // Sign convention pinned by b_{-3} = +(lambda-g)^{-2} sigma_1(Delta) and by
  // b(1)_{2-j} having to reproduce sigma(Delta).
  for (int j = 1; j <= depth; ++j) {
    std::map<int, Component> acc;
    for (int k = 0; k < int(sigma.size()); ++k) {
      if (!sigma[std::size_t(k)]) continue;
      for (int l = 0; l < j && l <= j - k; ++l) {
        const int gtot = j - k - l;
        if (gtot < 0) continue;
        for (int g1 = 0; g1 <= gtot; ++g1) {
          const int g2 = gtot - g1;
          const Component& dS = tables[std::size_t(k)].get(g1, g2);
          if (dS.empty()) continue;
          const double invfact = 1.0 / (factorial(g1) * factorial(g2));
          for (const auto& [kpole, compB] : b[std::size_t(l)]) {
            for (const auto& [modeA, fA] : dS)
              for (const auto& [modeB, fB] : compB) {
                if ((g1 > 0 && modeB.first == 0) || (g2 > 0 && modeB.second == 0)) continue;
                const double delta_factor = int_pow(modeB.first, g1) * int_pow(modeB.second, g2);
                const Cplx phase =
                    unit_phase(theta, static_cast<long long>(modeA.second) * modeB.first);
                CoefficientFunction f = fA * fB;
                f = f * (phase * delta_factor * invfact);
                component_at(acc[kpole], modeA.first + modeB.first, modeA.second + modeB.second,
                             ctx.tau) += f;
              }
          }
        }
      }
    }
    std::map<int, Component> bj;
    for (auto& [kpole, comp] : acc) {
      component_cleanup(comp);
      if (!comp.empty()) bj.emplace(kpole + 1, std::move(comp));
    }
    b.push_back(bj);
    out.set_piece(j, std::move(bj));
  }
  return out;
}

std::vector<AlgebraElement> resolvent_defect(const OperatorSymbol& delta,
                                             const ResolventSymbol& b, double xi1, double xi2,
                                             Cplx lambda) {
  const SymbolContext ctx = delta.context();
  const double theta = ctx.theta;
  const Cplx l = Cplx(xi1) + ctx.tau * Cplx(xi2);
  const Cplx lb = Cplx(xi1) + std::conj(ctx.tau) * Cplx(xi2);
  const Cplx g = l * lb;
  const int depth = b.max_offset();

  std::vector<const Component*> sigma(std::size_t(delta.max_offset() + 1), nullptr);
  for (const auto& [key, comp] : delta.components()) sigma[std::size_t(key.first)] = &comp;
  std::vector<PartialTable> tables;
  for (std::size_t k = 0; k < sigma.size(); ++k)
    tables.emplace_back(sigma[k] ? *sigma[k] : Component{});

  std::vector<AlgebraElement> defect(std::size_t(depth) + 1, AlgebraElement(theta));
  for (int j = 0; j <= depth; ++j) {
    AlgebraElement acc(theta);
    // lambda * b_j (the k = 0, gamma = 0 piece of lambda - sigma)
    acc += lambda * b.evaluate(j, xi1, xi2, lambda);
    // minus sum over symbol components with derivatives
    for (int k = 0; k < int(sigma.size()); ++k) {
      if (!sigma[std::size_t(k)]) continue;
      for (int ll = 0; ll <= j - k; ++ll) {
        const int gtot = j - k - ll;
        for (int g1 = 0; g1 <= gtot; ++g1) {
          const int g2 = gtot - g1;
          const Component& dS = tables[std::size_t(k)].get(g1, g2);
          if (dS.empty()) continue;
          const double invfact = 1.0 / (factorial(g1) * factorial(g2));
          AlgebraElement sval = evaluate_component(dS, theta, xi1, xi2);
          // delta^gamma acts on the modes of b_ll before evaluation
          AlgebraElement bval(theta);
          for (const auto& [kpole, comp] : b.piece(ll)) {
            Cplx pole = ipow(lambda - g, -kpole);
            for (const auto& [mode, f] : comp) {
              if ((g1 > 0 && mode.first == 0) || (g2 > 0 && mode.second == 0)) continue;
              const double delta_factor = int_pow(mode.first, g1) * int_pow(mode.second, g2);
              bval += AlgebraElement::monomial(theta, mode.first, mode.second,
                                               pole * delta_factor * f.evaluate(xi1, xi2));
            }
          }
          acc -= invfact * (sval * bval);
        }
      }
    }
    if (j == 0) acc -= AlgebraElement::unit(theta);
    defect[std::size_t(j)] = acc;
  }
  return defect;
}

void ParametricSymbol::deposit(int j, int m, int n, const CoefficientFunction& f) {
  if (j >= trunc_ || f.is_zero()) return;
  auto& comp = comps_[j];
  component_at(comp, m, n, ctx_.tau) += f;
  component_cleanup(comp);
}

OperatorSymbol ParametricSymbol::substitute(Cplx z) const {
  OperatorSymbol out(ctx_, 2.0 * z, trunc_);
  for (const auto& [j, comp] : comps_)
    for (const auto& [mode, f] : comp)
      out.deposit(j, mode.first, mode.second, f.substitute_z(z));
  return out;
}

OperatorSymbol ParametricSymbol::substitute(int z) const {
  OperatorSymbol out(ctx_, 2.0 * z, trunc_);
  for (const auto& [j, comp] : comps_)
    for (const auto& [mode, f] : comp)
      out.deposit(j, mode.first, mode.second, f.substitute_z(z));
  return out;
}

ParametricSymbol complex_power(const OperatorSymbol& delta, int depth) {
  ResolventSymbol res = resolvent_expansion(delta, depth);
  const SymbolContext ctx = delta.context();
  ParametricSymbol out(ctx, depth + 1);
  for (int j = 0; j <= depth; ++j) {
    for (const auto& [k, comp] : res.piece(j)) {
      // (1/2 pi i) oint lambda^z (lambda-g)^{-k} dlambda
      //   = [z(z-1)...(z-k+2)/(k-1)!] g^{z-k+1}
      ZPoly ff{Cplx(1.0)};
      for (int i = 0; i <= k - 2; ++i) ff = zpoly_mul(ff, ZPoly{Cplx(-double(i)), Cplx(1.0)});
      ff = zpoly_scale(ff, 1.0 / factorial(k - 1));
      CoeffTerm zt;
      zt.zc = ff;
      zt.zflag = true;
      zt.el = 1 - k;
      zt.elb = 1 - k;
      CoefficientFunction zfac = CoefficientFunction::from_term(ctx.tau, zt);
      for (const auto& [mode, f] : comp)
        out.deposit(j, mode.first, mode.second, f * zfac);
    }
  }
  return out;
}

OperatorSymbol log_symbol(const OperatorSymbol& delta, int depth) {
  const SymbolContext ctx = delta.context();
  ParametricSymbol cp = complex_power(delta, depth);

  // B_j = d/dz|_0 [b(z-1)_{2z-2-j}] - 2 L0 * b(-1)_{-2-j}; together these are
  // exactly |xi|^{-2-j} d/dz|_0 b(z-1)_{2z-2-j}(xi/|xi|) by homogeneity.
  std::vector<Component> B;
  for (int j = 0; j <= depth; ++j) {
    Component Bj;
    auto it = cp.components().find(j);
    if (it != cp.components().end()) {
      const CoefficientFunction minus2L0 =
          Cplx(-2.0) * CoefficientFunction::log_norm(ctx.tau);
      for (const auto& [mode, f] : it->second) {
        CoefficientFunction shifted = f.shift_z(-1);
        CoefficientFunction v = shifted.dz().substitute_z(0);
        v += minus2L0 * shifted.substitute_z(0);
        if (!v.is_zero()) Bj.emplace(mode, std::move(v));
      }
    }
    B.push_back(std::move(Bj));
  }

  std::vector<const Component*> sigma(std::size_t(delta.max_offset() + 1), nullptr);
  for (const auto& [key, comp] : delta.components()) sigma[std::size_t(key.first)] = &comp;
  std::vector<PartialTable> tables;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    tables.emplace_back(sigma[i] ? *sigma[i] : Component{});

  OperatorSymbol out(ctx, 0.0, depth + 1);
  out.deposit(0, 0, 0, Cplx(2.0) * CoefficientFunction::log_norm(ctx.tau));

  const double theta = ctx.theta;
  for (int k = 0; k <= depth; ++k) {
    for (int i = 0; i < int(sigma.size()); ++i) {
      if (!sigma[std::size_t(i)]) continue;
      for (int j = 0; j <= k - i; ++j) {
        const int gtot = k - i - j;
        if (gtot < 0) continue;
        for (int g1 = 0; g1 <= gtot; ++g1) {
          const int g2 = gtot - g1;
          const Component& dS = tables[std::size_t(i)].get(g1, g2);
          if (dS.empty()) continue;
          const double invfact = 1.0 / (factorial(g1) * factorial(g2));
          for (const auto& [modeA, fA] : dS)
            for (const auto& [modeB, fB] : B[std::size_t(j)]) {
              if ((g1 > 0 && modeB.first == 0) || (g2 > 0 && modeB.second == 0)) continue;
              const double delta_factor = int_pow(modeB.first, g1) * int_pow(modeB.second, g2);
              const Cplx phase =
                  unit_phase(theta, static_cast<long long>(modeA.second) * modeB.first);
              CoefficientFunction f = fA * fB;
              f = f * (phase * delta_factor * invfact);
              out.deposit(k, modeA.first + modeB.first, modeA.second + modeB.second, f);
            }
        }
      }
    }
  }
  return out;
}

}  // namespace nctsym
