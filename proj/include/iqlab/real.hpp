#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "iqlab/fixed.hpp"

namespace iqlab {

// ~332 bits of mantissa; enough to resolve cancellation down to 1e-90 in the
// lattice Gaussian sums and to re-verify fixed-point results at 256 bits.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>>;

inline Real real_pi() { return boost::math::constants::pi<Real>(); }
inline Real real_euler() { return boost::math::constants::euler<Real>(); }

template <int F>
Real to_real(const Fx<F>& x) {
  Real r(BigInt(x.raw));
  return boost::multiprecision::ldexp(r, -F);
}

template <int F>
Fx<F> fx_from_real(const Real& v) {
  Real scaled = boost::multiprecision::ldexp(v, F);
  Real rounded = boost::multiprecision::round(scaled);  // ties away from zero
  BigInt b(rounded);
  return Fx<F>::from_raw(Wide(b));
}

/** Complex number with Real components. */
struct CReal {
  Real re{0}, im{0};

  friend CReal operator+(const CReal& a, const CReal& b) { return {a.re + b.re, a.im + b.im}; }
  friend CReal operator-(const CReal& a, const CReal& b) { return {a.re - b.re, a.im - b.im}; }
  friend CReal operator*(const CReal& a, const CReal& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  CReal& operator+=(const CReal& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Real abs() const { return boost::multiprecision::sqrt(re * re + im * im); }
};

/** e(t) = exp(2 pi i t). */
inline CReal cis(const Real& t) {
  Real a = 2 * real_pi() * t;
  return {cos(a), sin(a)};
}

}  // namespace iqlab
