#pragma once

// Graded operator-symbol arithmetic.  A symbol is a finite collection of
// homogeneous components sigma_{alpha-j,l}(xi) log^l|xi| indexed by the
// integer offset j from the order alpha and the log power l.  Each
// component is stored as a Fourier-mode map
//     (m,n)  ->  CoefficientFunction,
// representing  sum_{m,n} f_{mn}(xi) (x) U^m V^n,  and keeps its L0 factors
// inside the coefficient (so a component keyed (j,l) holds exactly the
// terms with pL0 == l).

#include <map>
#include <utility>
#include <vector>

#include "nctsym/algebra.hpp"
#include "nctsym/coefficient.hpp"

namespace nctsym {

struct SymbolContext {
  double theta = kDefaultTheta;
  Cplx tau{0.0, 1.0};
  bool operator==(const SymbolContext&) const = default;
};

using Component = std::map<std::pair<int, int>, CoefficientFunction>;

Component component_add(Component a, const Component& b);
Component component_scale(Component a, Cplx s);
bool component_is_zero(const Component& c);
AlgebraElement evaluate_component(const Component& c, double theta, double xi1, double xi2,
                                  std::optional<Cplx> z = std::nullopt);

class OperatorSymbol {
public:
  // Components with degree <= order - trunc are unknown; a symbol whose
  // expansion is complete (differential operators, exact inverses) carries
  // trunc = kExact.
  static constexpr int kExact = 1 << 24;

  OperatorSymbol(SymbolContext ctx, Cplx order, int trunc)
      : ctx_(ctx), order_(order), trunc_(trunc) {}

  static OperatorSymbol zero(SymbolContext ctx, Cplx order, int trunc = kExact) {
    return OperatorSymbol(ctx, order, trunc);
  }
  // Order-zero symbol 1 (x) a of a left-multiplication operator.
  static OperatorSymbol multiplication(SymbolContext ctx, const AlgebraElement& a);
  // Symbol l = xi1 + tau xi2 of dbar.
  static OperatorSymbol dbar(SymbolContext ctx);
  // sigma(D) = l + alpha for D = dbar + alpha.
  static OperatorSymbol cauchy_riemann(SymbolContext ctx, const AlgebraElement& alpha);

  const SymbolContext& context() const { return ctx_; }
  Cplx order() const { return order_; }
  int trunc() const { return trunc_; }
  bool is_exact() const { return trunc_ >= kExact; }
  const std::map<std::pair<int, int>, Component>& components() const { return comps_; }

  // Adds f (x) U^m V^n into the component bucket at offset j, splitting the
  // coefficient terms by their L0 power.
  void deposit(int j, int m, int n, const CoefficientFunction& f);
  void deposit(int j, const Component& c);

  // Component at (degree, logpower); empty when absent.  Throws when the
  // requested degree lies at or below the truncation depth.
  Component homogeneous_component(Cplx degree, int logpower = 0) const;
  // Same, stripped of its L0 factors (the bare coefficient sigma_{d,l}).
  Component homogeneous_coefficient(Cplx degree, int logpower = 0) const;

  bool all_polynomial() const;  // every coefficient a plain xi-polynomial
  bool all_central() const;     // every Fourier mode is (0,0)
  int max_offset() const;
  int max_logpower() const;

  // Value of the stored expansion at a point (no cut-off applied).
  AlgebraElement evaluate(double xi1, double xi2, std::optional<Cplx> z = std::nullopt) const;

  // Grading consistency: every term in bucket (j,l) must be homogeneous of
  // degree order - j with L0 power l.  Used by tests.
  void check_grading(double tol = 1e-9) const;

  OperatorSymbol& operator+=(const OperatorSymbol& rhs);
  OperatorSymbol& operator*=(Cplx s);

private:
  SymbolContext ctx_;
  Cplx order_;
  int trunc_;
  std::map<std::pair<int, int>, Component> comps_;
};

OperatorSymbol operator+(OperatorSymbol a, const OperatorSymbol& b);
OperatorSymbol operator-(OperatorSymbol a, const OperatorSymbol& b);
OperatorSymbol operator*(Cplx s, OperatorSymbol a);

inline constexpr int kDefaultDepth = 6;

// Symbol of the differential operator sum a_{j1,j2} delta_1^{j1} delta_2^{j2}:
// the xi-polynomial sum a_{j1,j2} xi_1^{j1} xi_2^{j2}.  Exact.
OperatorSymbol from_differential(SymbolContext ctx,
                                 const std::map<std::pair<int, int>, AlgebraElement>& coeffs);

// sigma(PQ) = sum_gamma (1/gamma!) d^gamma sigma(P) delta^gamma sigma(Q),
// computed to the requested depth.  Exact (full) when the gamma recursion
// terminates, i.e. when P is polynomial in xi or Q is central.
OperatorSymbol star_product(const OperatorSymbol& p, const OperatorSymbol& q,
                            int depth = kDefaultDepth);

// sigma(P^*) = sum_gamma (1/gamma!) d^gamma delta^gamma (sigma(xi))^*.
OperatorSymbol adjoint_symbol(const OperatorSymbol& p, int depth = kDefaultDepth);

// Right parametrix of an elliptic symbol with central invertible leading
// term: star_product(p, parametrix(p, N)) = 1 + O(degree -N).
OperatorSymbol parametrix(const OperatorSymbol& p, int depth = kDefaultDepth);

// Resolvent expansion of an order-2 symbol with leading term g: homogeneous
// components of (lambda - Delta)^{-1} as partial fractions in (lambda - g),
// lambda counting as degree 2.
class ResolventSymbol {
public:
  ResolventSymbol(SymbolContext ctx, int depth) : ctx_(ctx), depth_(depth) {}

  const SymbolContext& context() const { return ctx_; }
  int depth() const { return depth_; }
  // Pieces of b_{-2-j}; key is the pole exponent k in (lambda - g)^{-k}.
  const std::map<int, Component>& piece(int j) const;
  int max_offset() const { return int(comps_.size()) - 1; }

  void set_piece(int j, std::map<int, Component> piece);

  // Value of b_{-2-j} at a numeric (xi, lambda).
  AlgebraElement evaluate(int j, double xi1, double xi2, Cplx lambda) const;

private:
  SymbolContext ctx_;
  int depth_;
  std::vector<std::map<int, Component>> comps_;
};

ResolventSymbol resolvent_expansion(const OperatorSymbol& delta, int depth = kDefaultDepth);

// Components of (lambda - sigma(Delta)) * B - 1 in the resolvent class,
// evaluated at numeric (xi, lambda); index j of the returned vector is the
// degree offset.  Vanishing entries certify the resolvent identity.
std::vector<AlgebraElement> resolvent_defect(const OperatorSymbol& delta,
                                             const ResolventSymbol& b, double xi1, double xi2,
                                             Cplx lambda);

// z-dependent symbol family sigma(Delta^z): components b(z)_{2z-j} with
// falling-factorial z-polynomials and g^{z-k} factors.
class ParametricSymbol {
public:
  ParametricSymbol(SymbolContext ctx, int trunc) : ctx_(ctx), trunc_(trunc) {}

  const SymbolContext& context() const { return ctx_; }
  int trunc() const { return trunc_; }
  const std::map<int, Component>& components() const { return comps_; }

  void deposit(int j, int m, int n, const CoefficientFunction& f);

  // Numeric substitution: an order-2z symbol.  The integer overload stays in
  // the integer-exponent class.
  OperatorSymbol substitute(Cplx z) const;
  OperatorSymbol substitute(int z) const;

private:
  SymbolContext ctx_;
  int trunc_;
  std::map<int, Component> comps_;
};

// Cauchy-integral complex power: per pole term,
//   (1/2 pi i) oint lambda^z (lambda-g)^{-k} dlambda
//     = [z (z-1) ... (z-k+2) / (k-1)!] g^{z-k+1}.
ParametricSymbol complex_power(const OperatorSymbol& delta, int depth = kDefaultDepth);

// Log-polyhomogeneous symbol of log Delta for an order-2 positive elliptic
// Delta: the exact 2 log|xi| part plus a classical order-zero remainder
// assembled from d/dz at z=0 of the complex-power family.
OperatorSymbol log_symbol(const OperatorSymbol& delta, int depth = kDefaultDepth);

}  // namespace nctsym
