#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "iqlab/errors.hpp"

namespace iqlab {

using BigInt = boost::multiprecision::cpp_int;
using Wide = boost::multiprecision::int512_t;

/**
 * Binary fixed-point real number with FracBits fractional bits.
 *
 * The stored value is raw / 2^FracBits.  All arithmetic provided here is
 * exact; narrowing conversions round to nearest with ties away from zero.
 * The 512-bit backing leaves ample headroom: every quantity handled by the
 * library keeps |value| far below 2^200.
 */
template <int FracBits>
struct Fx {
  static_assert(FracBits > 0 && FracBits <= 384);
  Wide raw{0};

  static constexpr int frac_bits = FracBits;

  static Fx from_raw(Wide r) { return Fx{r}; }

  static Fx from_int(long long v) { return Fx{Wide(v) << FracBits}; }

  static Fx one() { return from_int(1); }

  static Fx half() { return Fx{Wide(1) << (FracBits - 1)}; }

  /** Nearest fixed-point value to num/den; den > 0 required. */
  static Fx from_ratio(const BigInt& num, const BigInt& den) {
    if (den <= 0) throw ParamError("from_ratio: denominator must be positive");
    BigInt scaled = num << FracBits;
    BigInt q = rounded_div(scaled, den);
    return Fx{Wide(q)};
  }

  /** Nearest fixed-point value to a finite double, ties away from zero. */
  static Fx from_double(double v) {
    if (!std::isfinite(v)) throw ParamError("from_double: value must be finite");
    if (v == 0.0) return Fx{};
    int e = 0;
    double m = std::frexp(v, &e);
    long long mant = std::llround(std::ldexp(m, 53));  // exact: |m| in [1/2, 1)
    int shift = FracBits + e - 53;
    if (shift >= 0) {
      if (shift > 380) throw OverflowError("Fx::from_double");
      return Fx{Wide(mant) << shift};
    }
    int drop = -shift;
    if (drop >= 256) return Fx{};  // below half an ulp of the format
    Wide h = Wide(1) << (drop - 1);
    Wide q;
    if (mant >= 0)
      q = (Wide(mant) + h) >> drop;
    else
      q = -((Wide(-mant) + h) >> drop);
    return Fx{q};
  }

  /** Parse a plain decimal literal such as "-12.25" or "0.5". */
  static Fx from_decimal(std::string_view s) {
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      neg = s[i] == '-';
      ++i;
    }
    BigInt num = 0;
    BigInt den = 1;
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '.') {
        if (seen_dot) throw ParamError("bad decimal literal: " + std::string(s));
        seen_dot = true;
      } else if (c >= '0' && c <= '9') {
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        seen_digit = true;
      } else {
        throw ParamError("bad decimal literal: " + std::string(s));
      }
    }
    if (!seen_digit) throw ParamError("bad decimal literal: " + std::string(s));
    if (neg) num = -num;
    return from_ratio(num, den);
  }

  friend Fx operator+(const Fx& a, const Fx& b) { return Fx{a.raw + b.raw}; }
  friend Fx operator-(const Fx& a, const Fx& b) { return Fx{a.raw - b.raw}; }
  Fx operator-() const { return Fx{-raw}; }

  friend Fx operator*(const Fx& a, long long k) { return Fx{a.raw * k}; }
  friend Fx operator*(long long k, const Fx& a) { return a * k; }

  friend bool operator==(const Fx& a, const Fx& b) { return a.raw == b.raw; }
  friend bool operator!=(const Fx& a, const Fx& b) { return a.raw != b.raw; }
  friend bool operator<(const Fx& a, const Fx& b) { return a.raw < b.raw; }
  friend bool operator>(const Fx& a, const Fx& b) { return a.raw > b.raw; }
  friend bool operator<=(const Fx& a, const Fx& b) { return a.raw <= b.raw; }
  friend bool operator>=(const Fx& a, const Fx& b) { return a.raw >= b.raw; }

  bool is_zero() const { return raw == 0; }

  bool is_integer() const { return frac_raw() == 0; }

  Fx abs() const { return raw < 0 ? Fx{-raw} : *this; }

  /** Fractional part in [0, 1). */
  Fx frac() const { return Fx{frac_raw()}; }

  /** Distance to the nearest integer, a value in [0, 1/2]. */
  Fx dist_to_int() const {
    Wide f = frac_raw();
    Wide other = (Wide(1) << FracBits) - f;
    return Fx{f < other ? f : other};
  }

  /** Nearest integer, ties away from zero. */
  BigInt round_nearest() const {
    Wide h = Wide(1) << (FracBits - 1);
    Wide q;
    if (raw >= 0)
      q = (raw + h) >> FracBits;
    else
      q = -((-raw + h) >> FracBits);
    return BigInt(q);
  }

  long long round_to_ll() const {
    BigInt r = round_nearest();
    if (r > std::numeric_limits<long long>::max() || r < std::numeric_limits<long long>::min())
      throw OverflowError("round_to_ll");
    return static_cast<long long>(r);
  }

  BigInt floor_int() const {
    Wide q = raw >> FracBits;  // arithmetic shift: floor for negatives
    return BigInt(q);
  }

  double to_double() const { return std::ldexp(static_cast<double>(raw), -FracBits); }

  /** Exact widening or round-to-nearest narrowing between precisions. */
  template <int G>
  Fx<G> rescale() const {
    if constexpr (G >= FracBits) {
      return Fx<G>{raw << (G - FracBits)};
    } else {
      constexpr int drop = FracBits - G;
      Wide h = Wide(1) << (drop - 1);
      Wide q;
      if (raw >= 0)
        q = (raw + h) >> drop;
      else
        q = -((-raw + h) >> drop);
      return Fx<G>{q};
    }
  }

 private:
  Wide frac_raw() const {
    Wide m = Wide(1) << FracBits;
    Wide f = raw % m;  // sign-magnitude backing: remainder follows the dividend sign
    if (f < 0) f += m;
    return f;
  }

  static BigInt rounded_div(const BigInt& a, const BigInt& b) {
    // nearest, ties away from zero; b > 0
    if (a >= 0) return (2 * a + b) / (2 * b);
    return -((2 * (-a) + b) / (2 * b));
  }
};

using Fx128 = Fx<128>;
using Fx256 = Fx<256>;

/** Exact product, widening to twice the fractional precision of the inputs. */
template <int F>
Fx<2 * F> mul_widen(const Fx<F>& a, const Fx<F>& b) {
  static_assert(2 * F <= 384);
  return Fx<2 * F>{a.raw * b.raw};
}

}  // namespace iqlab
