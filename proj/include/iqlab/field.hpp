#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "iqlab/fixed.hpp"
#include "iqlab/real.hpp"

namespace iqlab {

/**
 * Shape of the canonical ring generator.
 *
 * sqrt_d:    omega = sqrt(d)          (d = -1, -2)
 * half_plus: omega = (1 + sqrt(d))/2  (d = -3, -7, -11, -19, -43, -67, -163)
 */
enum class OmegaKind { sqrt_d, half_plus };

/** Ring element n1 + n2*omega with exact integer coordinates. */
struct RingElt {
  long long n1{0}, n2{0};

  friend bool operator==(const RingElt&, const RingElt&) = default;
  bool is_zero() const { return n1 == 0 && n2 == 0; }
};

/** Coordinates of a complex number in the basis (1, omega), fixed point. */
template <int F>
struct CoordsT {
  Fx<F> re, im;  // value = re + im * omega
};
using AlphaCoords = CoordsT<128>;
using Coords256 = CoordsT<256>;

/**
 * One of the nine imaginary quadratic fields of class number one, with the
 * ring data every other module consumes.
 *
 * omega satisfies omega^2 = xi1 + xi2*omega; trace_t = 2 Re omega; and
 * Im omega = sqrt(|d|) / im_div with im_div in {1, 2}.
 */
struct FieldCtx {
  int d{0};
  OmegaKind kind{OmegaKind::sqrt_d};
  int trace_t{0};
  long long xi1{0};
  int xi2{0};
  long long norm_omega{0};
  int unit_count{2};
  int im_div{1};
  std::array<RingElt, 6> units{};  // first unit_count entries are the units
  Fx128 im_omega_f{};
  Fx256 im_omega_f256{};

  Real im_omega() const;
  /** Covolume of the ring lattice: area of the (1, omega) parallelogram. */
  Real area_lambda() const { return im_omega(); }
  /** The approximation constant sqrt(6)/pi times the lattice covolume. */
  Real gintner_c() const;
  double gintner_c_d() const { return static_cast<double>(gintner_c()); }
};

/** Build the context for one of d in {-1,-2,-3,-7,-11,-19,-43,-67,-163}. */
FieldCtx make_field(int d);

/** All nine admissible values of d, by decreasing d. */
extern const std::array<int, 9> kHeegnerD;

long long norm(const FieldCtx& f, const RingElt& n);
RingElt ring_mul(const FieldCtx& f, const RingElt& a, const RingElt& b);
RingElt ring_add(const RingElt& a, const RingElt& b);
RingElt ring_sub(const RingElt& a, const RingElt& b);
RingElt ring_neg(const RingElt& a);
RingElt conj(const FieldCtx& f, const RingElt& a);

/** Exact quotient num/den when den divides num; nullopt otherwise. */
std::optional<RingElt> try_div(const FieldCtx& f, const RingElt& num, const RingElt& den);

/** max of the distances of both coordinates to the nearest integers. */
template <int F>
Fx<F> dist_coords(const CoordsT<F>& c) {
  Fx<F> a = c.re.dist_to_int(), b = c.im.dist_to_int();
  return a > b ? a : b;
}
inline Fx128 dist_omega(const FieldCtx&, const AlphaCoords& c) { return dist_coords(c); }

/** Coordinates of l * rho for a ring element l acting on coordinates rho. */
template <int F>
CoordsT<F> mul_elt_coords(const FieldCtx& f, const RingElt& l, const CoordsT<F>& rho) {
  CoordsT<F> out;
  out.re = rho.re * l.n1 + rho.im * (l.n2 * f.xi1);
  out.im = rho.re * l.n2 + rho.im * (l.n1 + l.n2 * f.xi2);
  return out;
}

/** Im coordinate of l * rho by the closed bilinear formula. */
template <int F>
Fx<F> im_omega_of_product(const FieldCtx& f, const RingElt& l, const CoordsT<F>& rho) {
  return rho.re * l.n2 + rho.im * (l.n1 + l.n2 * f.xi2);
}

template <int F>
Fx<F> re_omega_of_product(const FieldCtx& f, const RingElt& l, const CoordsT<F>& rho) {
  return rho.re * l.n1 + rho.im * (l.n2 * f.xi1);
}

/**
 * Convert rectangular coordinates (re + i*im) to omega-coordinates.
 * Inputs must carry at least 160 fractional bits of honest precision;
 * the conversion itself keeps the error below 2^-200.
 */
Coords256 rect_to_omega_256(const FieldCtx& f, const Fx256& re, const Fx256& im,
                            int src_frac_bits = 256);
AlphaCoords rect_to_omega(const FieldCtx& f, const Fx256& re, const Fx256& im,
                          int src_frac_bits = 256);

/** Rectangular coordinates (Re z, Im z) of a coordinate pair. */
std::pair<Real, Real> to_rect(const FieldCtx& f, const AlphaCoords& c);
std::pair<Real, Real> to_rect_256(const FieldCtx& f, const Coords256& c);

/** |z|^2 for z with omega-coordinates (u, v), via the integral norm form. */
Real abs2_coords(const FieldCtx& f, const Real& u, const Real& v);

/**
 * A target number alpha carried at two precisions plus its rectangular value.
 * label records how it was specified (preset name or decimal pair).
 */
struct Alpha {
  std::string label;
  AlphaCoords w128;
  Coords256 w256;
  Real rect_re, rect_im;
};

/** Rectangular value of a named preset: e_pi, sqrt2_sqrt3, log2_gamma. */
std::pair<Real, Real> preset_alpha_rect(const std::string& name);

/**
 * Accept a preset name or a "re,im" decimal pair (each part needing at least
 * 50 significant decimal digits) and attach it to the field.
 */
Alpha make_alpha(const FieldCtx& f, const std::string& spec);

}  // namespace iqlab
