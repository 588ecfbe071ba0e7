#include "iqlab/field.hpp"

#include <algorithm>
#include <cstdlib>

namespace iqlab {

const std::array<int, 9> kHeegnerD = {-1, -2, -3, -7, -11, -19, -43, -67, -163};

namespace {

bool squarefree_small(long long m) {
  for (long long p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  return true;
}

using I128 = __int128;

long long checked_ll(I128 v, const char* where) {
  if (v > I128(std::numeric_limits<long long>::max()) ||
      v < I128(std::numeric_limits<long long>::min()))
    throw OverflowError(where);
  return static_cast<long long>(v);
}

// coordinates this large would push intermediate products past 126 bits
void guard_coord(const RingElt& n, const char* where) {
  constexpr long long lim = 1LL << 62;
  if (std::llabs(n.n1) >= lim || std::llabs(n.n2) >= lim) throw OverflowError(where);
}

}  // namespace

FieldCtx make_field(int d) {
  if (d >= 0 || !squarefree_small(-static_cast<long long>(d))) throw NotNegativeSquarefree(d);
  if (std::find(kHeegnerD.begin(), kHeegnerD.end(), d) == kHeegnerD.end())
    throw NotClassNumberOne(d);

  FieldCtx f;
  f.d = d;
  int r4 = ((d % 4) + 4) % 4;
  if (r4 == 1) {
    f.kind = OmegaKind::half_plus;
    f.trace_t = 1;
    f.xi1 = (static_cast<long long>(d) - 1) / 4;
    f.xi2 = 1;
    f.norm_omega = (1 - static_cast<long long>(d)) / 4;
    f.im_div = 2;
  } else {
    f.kind = OmegaKind::sqrt_d;
    f.trace_t = 0;
    f.xi1 = d;
    f.xi2 = 0;
    f.norm_omega = -d;
    f.im_div = 1;
  }

  if (d == -1) {
    f.unit_count = 4;
    f.units = {RingElt{1, 0}, RingElt{0, 1}, RingElt{-1, 0}, RingElt{0, -1}};
  } else if (d == -3) {
    f.unit_count = 6;
    f.units = {RingElt{1, 0},  RingElt{0, 1},  RingElt{-1, 1},
               RingElt{-1, 0}, RingElt{0, -1}, RingElt{1, -1}};
  } else {
    f.unit_count = 2;
    f.units = {RingElt{1, 0}, RingElt{-1, 0}};
  }

  // Im omega = sqrt(|d|)/im_div via integer square root at guarded precision
  {
    const int guard = 32;
    BigInt s = boost::multiprecision::sqrt(BigInt(-d) << (2 * (256 + guard)));
    BigInt raw256 = (s / f.im_div) >> guard;
    f.im_omega_f256 = Fx256::from_raw(Wide(raw256));
    f.im_omega_f = f.im_omega_f256.rescale<128>();
  }
  return f;
}

Real FieldCtx::im_omega() const {
  return sqrt(Real(-d)) / im_div;
}

Real FieldCtx::gintner_c() const {
  return sqrt(Real(6)) / real_pi() * im_omega();
}

long long norm(const FieldCtx& f, const RingElt& n) {
  guard_coord(n, "norm");
  I128 a = n.n1, b = n.n2;
  I128 v = a * a + I128(f.trace_t) * a * b + I128(f.norm_omega) * b * b;
  return checked_ll(v, "norm");
}

RingElt ring_mul(const FieldCtx& f, const RingElt& a, const RingElt& b) {
  guard_coord(a, "ring_mul");
  guard_coord(b, "ring_mul");
  I128 m1 = a.n1, m2 = a.n2, n1 = b.n1, n2 = b.n2;
  I128 c1 = m1 * n1 + I128(f.xi1) * m2 * n2;
  I128 c2 = m1 * n2 + m2 * n1 + I128(f.xi2) * m2 * n2;
  return RingElt{checked_ll(c1, "ring_mul"), checked_ll(c2, "ring_mul")};
}

RingElt ring_add(const RingElt& a, const RingElt& b) { return {a.n1 + b.n1, a.n2 + b.n2}; }
RingElt ring_sub(const RingElt& a, const RingElt& b) { return {a.n1 - b.n1, a.n2 - b.n2}; }
RingElt ring_neg(const RingElt& a) { return {-a.n1, -a.n2}; }

RingElt conj(const FieldCtx& f, const RingElt& a) {
  return RingElt{a.n1 + f.trace_t * a.n2, -a.n2};
}

std::optional<RingElt> try_div(const FieldCtx& f, const RingElt& num, const RingElt& den) {
  if (den.is_zero()) throw DivisionByZero();
  guard_coord(num, "try_div");
  guard_coord(den, "try_div");
  I128 N = norm(f, den);
  RingElt dc = conj(f, den);
  I128 p1 = I128(num.n1) * dc.n1 + I128(f.xi1) * num.n2 * dc.n2;
  I128 p2 = I128(num.n1) * dc.n2 + I128(num.n2) * dc.n1 + I128(f.xi2) * num.n2 * dc.n2;
  if (p1 % N != 0 || p2 % N != 0) return std::nullopt;
  return RingElt{checked_ll(p1 / N, "try_div"), checked_ll(p2 / N, "try_div")};
}

Coords256 rect_to_omega_256(const FieldCtx& f, const Fx256& re, const Fx256& im,
                            int src_frac_bits) {
  if (src_frac_bits < 160)
    throw PrecisionLoss("rect_to_omega needs >= 160 fractional bits, got " +
                        std::to_string(src_frac_bits));
  BigInt num = BigInt(im.raw) << 256;
  BigInt den(f.im_omega_f256.raw);
  BigInt q;
  if (num >= 0)
    q = (2 * num + den) / (2 * den);
  else
    q = -((2 * (-num) + den) / (2 * den));
  Coords256 c;
  c.im = Fx256::from_raw(Wide(q));
  c.re = re;
  if (f.trace_t == 1) {
    // re_omega = re - im_omega_coord / 2, rounded at the last bit
    Wide half = c.im.raw >= 0 ? (c.im.raw + 1) / 2 : -((-c.im.raw + 1) / 2);
    c.re = Fx256::from_raw(re.raw - half);
  }
  return c;
}

AlphaCoords rect_to_omega(const FieldCtx& f, const Fx256& re, const Fx256& im,
                          int src_frac_bits) {
  Coords256 c = rect_to_omega_256(f, re, im, src_frac_bits);
  return AlphaCoords{c.re.rescale<128>(), c.im.rescale<128>()};
}

std::pair<Real, Real> to_rect(const FieldCtx& f, const AlphaCoords& c) {
  Real u = to_real(c.re), v = to_real(c.im);
  return {u + v * f.trace_t / 2, v * f.im_omega()};
}

std::pair<Real, Real> to_rect_256(const FieldCtx& f, const Coords256& c) {
  Real u = to_real(c.re), v = to_real(c.im);
  return {u + v * f.trace_t / 2, v * f.im_omega()};
}

Real abs2_coords(const FieldCtx& f, const Real& u, const Real& v) {
  return u * u + f.trace_t * u * v + f.norm_omega * v * v;
}

std::pair<Real, Real> preset_alpha_rect(const std::string& name) {
  if (name == "e_pi") return {exp(Real(1)), real_pi()};
  if (name == "sqrt2_sqrt3") return {sqrt(Real(2)), sqrt(Real(3))};
  if (name == "log2_gamma") return {log(Real(2)), real_euler()};
  throw ParamError("unknown alpha preset: " + name);
}

namespace {

int significant_decimal_digits(std::string_view s) {
  int digits = 0;
  bool leading = true;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      if (leading && c == '0') continue;
      leading = false;
      ++digits;
    }
  }
  return digits;
}

}  // namespace

Alpha make_alpha(const FieldCtx& f, const std::string& spec) {
  Alpha a;
  a.label = spec;
  Real rre, rim;
  auto comma = spec.find(',');
  if (comma == std::string::npos) {
    std::tie(rre, rim) = preset_alpha_rect(spec);
  } else {
    std::string ps = spec.substr(0, comma), qs = spec.substr(comma + 1);
    if (significant_decimal_digits(ps) < 50 || significant_decimal_digits(qs) < 50)
      throw PrecisionLoss("decimal alpha components need >= 50 significant digits");
    rre = Real(ps);
    rim = Real(qs);
  }
  a.rect_re = rre;
  a.rect_im = rim;
  Fx256 re = fx_from_real<256>(rre), im = fx_from_real<256>(rim);
  a.w256 = rect_to_omega_256(f, re, im);
  a.w128 = AlphaCoords{a.w256.re.rescale<128>(), a.w256.im.rescale<128>()};
  return a;
}

}  // namespace iqlab
