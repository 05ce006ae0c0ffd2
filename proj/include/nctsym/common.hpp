#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nctsym {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Golden-ratio default deformation parameter (sqrt(5)-1)/2.
inline constexpr double kDefaultTheta = 0.61803398874989484820;

// Raised when a node-doubling or step-refinement check fails to settle
// below the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an evaluation lands too close to a pole of a meromorphic
// family (analytic continuation undefined there).
class PoleError : public std::runtime_error {
public:
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// e^{2 pi i theta k}.  The angle is reduced mod 1 before scaling by 2 pi
// so that repeated phase accumulation does not drift for large |k|.
inline Cplx unit_phase(double theta, long long k) {
  double frac = std::fmod(static_cast<double>(k) * theta, 1.0);
  return std::polar(1.0, kTwoPi * frac);
}

// Integer power of a complex number, |e| small.
inline Cplx ipow(Cplx base, int e) {
  if (e == 0) return Cplx(1.0);
  bool inv = e < 0;
  unsigned n = static_cast<unsigned>(inv ? -e : e);
  Cplx acc(1.0), b = base;
  while (n) {
    if (n & 1u) acc *= b;
    b *= b;
    n >>= 1u;
  }
  return inv ? Cplx(1.0) / acc : acc;
}

inline bool near_integer(double x, double tol = 1e-9) {
  return std::abs(x - std::round(x)) < tol;
}

}  // namespace nctsym
