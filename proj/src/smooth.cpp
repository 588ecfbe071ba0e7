#include "iqlab/smooth.hpp"

#include <cmath>
#include <vector>

#include "iqlab/arith.hpp"
#include "iqlab/errors.hpp"

namespace iqlab {

namespace {

// exp(-u) < 2^-140 once u >= kTailExp; beyond it geometric decay keeps every
// truncated tail here under 2^-120.
constexpr double kTailExp = 97.1;  // 140 log 2

Real wdelta_direct(const Real& th, const Real& de, const Real& pi) {
  long long n0 = std::llround(static_cast<double>(th));
  long long K = static_cast<long long>(std::ceil(5.6 * static_cast<double>(de))) + 1;
  Real acc = 0;
  for (long long n = n0 - K; n <= n0 + K; ++n) {
    Real u = th - n;
    acc += exp(-pi * u * u / (de * de));
  }
  return acc;
}

}  // namespace

SmoothWeights make_smooth_weights(const FieldCtx& f, long long x, double epsilon,
                                  const Fx128& delta, const AlphaCoords& alpha) {
  if (x < 2) throw ParamError("smooth weights: x must be >= 2");
  if (!(epsilon > 0 && epsilon <= 0.5))
    throw ParamError("smooth weights: epsilon outside (0, 1/2]");
  if (delta.raw <= 0 || delta > Fx128::half())
    throw ParamError("smooth weights: delta outside (0, 1/2]");
  if (std::log(delta.to_double()) < -1000.0 * std::log(static_cast<double>(x)))
    throw ParamError("smooth weights: delta below x^-1000");
  SmoothWeights w;
  w.field = f;
  w.x = x;
  w.epsilon = epsilon;
  w.N = std::pow(static_cast<double>(x), 1 - epsilon);
  w.delta = delta;
  w.alpha = alpha;
  return w;
}

SawtoothResult sawtooth_approx(double x, long long J) {
  if (J < 1) throw ParamError("sawtooth: J must be >= 1");
  SawtoothResult r;
  r.exact = x - std::floor(x) - 0.5;
  // the pair (j, -j) collapses to -sin(2 pi j x) / (pi j)
  double s = 0;
  for (long long j = J - 1; j >= 1; --j) s -= std::sin(2 * M_PI * j * x) / (M_PI * j);
  r.approx = s;
  r.err = std::abs(r.approx - r.exact);
  return r;
}

IndicatorExpansion indicator_expansion(const FieldCtx& f, const SmoothWeights& w,
                                       const RingElt& y) {
  if (norm(f, y) > w.x) throw ParamError("indicator expansion: N(y) exceeds the box");
  CoordsT<128> c = mul_elt_coords(f, y, w.alpha);
  const Fx128 d = w.delta;
  auto psi = [](const Fx128& t) { return t.frac() - Fx128::half(); };
  Fx128 a1m = -c.re - d, a1p = -c.re + d;
  Fx128 a2m = -c.im - d, a2p = -c.im + d;
  IndicatorExpansion out;
  out.boundary =
      a1m.is_integer() || a1p.is_integer() || a2m.is_integer() || a2p.is_integer();
  Fx128 xi1 = psi(a1m) - psi(a1p);
  Fx128 xi2 = psi(a2m) - psi(a2p);
  Fx256 rhs = mul_widen(d, d) * 4 + (mul_widen(d, xi1) + mul_widen(d, xi2)) * 2 +
              mul_widen(xi1, xi2);
  out.rhs = rhs.to_double();
  out.lhs = dist_coords(c) < d ? 1 : 0;
  return out;
}

ThetaPair theta_wdelta(double theta, double delta) {
  if (!(delta > 0 && delta <= 0.5)) throw ParamError("theta kernel: delta outside (0, 1/2]");
  Real pi = real_pi();
  Real th(theta), de(delta);
  ThetaPair out{wdelta_direct(th, de, pi), Real(1)};
  long long J = static_cast<long long>(std::ceil(std::sqrt(kTailExp) / delta)) + 1;
  if (J > 20'000'000) throw BoundTooLarge("theta kernel: dual truncation too long");
  for (long long j = J; j >= 1; --j)
    out.dual += 2 * exp(-pi * de * de * j * j) * cos(2 * pi * j * th);
  out.dual *= de;
  return out;
}

GaussLatticeSum gauss_lattice_sum(const FieldCtx& f, double R, const AlphaCoords& theta,
                                  double x_eps) {
  if (R < 1) throw ParamError("lattice gaussian: R must be >= 1");
  Real pi = real_pi(), Rr(R);
  long long B = static_cast<long long>(std::ceil(200.0 * R));

  // e^{-pi n / R} for every norm up to the cutoff, built by one running product
  std::vector<Real> wt(static_cast<std::size_t>(B) + 1);
  Real q = exp(-pi / Rr);
  wt[0] = 1;
  for (long long n = 1; n <= B; ++n) wt[n] = wt[n - 1] * q;

  GaussLatticeSum out;
  CReal step = cis(to_real(theta.im.frac()));
  long long rows = norm_row_count(f, B);
  for (long long n2 = -rows; n2 <= rows; ++n2) {
    RowBounds rb = norm_row_range(f, B, n2);
    if (rb.empty) continue;
    Fx128 base = theta.re * n2 + theta.im * (n2 * f.xi2);
    CReal z = cis(to_real((base + theta.im * rb.lo).frac()));
    for (long long n1 = rb.lo; n1 <= rb.hi; ++n1) {
      const Real& g = wt[norm(f, RingElt{n1, n2})];
      out.direct.re += g * z.re;
      out.direct.im += g * z.im;
      z = z * step;
    }
  }

  Real v1 = to_real(theta.im.frac());
  Real v2 = to_real((theta.re + theta.im * f.xi2).frac());
  Real s = f.im_omega();
  Real r = Real(f.trace_t) / 2;
  double halfwidth = std::sqrt(kTailExp / (M_PI * R));
  long long K1 = static_cast<long long>(std::ceil(halfwidth)) + 1;
  long long K2 =
      static_cast<long long>(std::ceil(static_cast<double>(s) * halfwidth)) + 1;
  long long k10 = std::llround(static_cast<double>(v1));
  long long k20 =
      std::llround(static_cast<double>(v2 + r * (Real(k10) - v1)));
  Real total = 0;
  for (long long k1 = k10 - K1; k1 <= k10 + K1; ++k1) {
    Real u1 = Real(k1) - v1;
    Real c2 = v2 + r * u1;
    long long kc = std::llround(static_cast<double>(c2));
    for (long long k2 = kc - K2; k2 <= kc + K2; ++k2) {
      Real u2 = (Real(k2) - c2) / s;
      Real term = (Rr / s) * exp(-pi * Rr * (u1 * u1 + u2 * u2));
      total += term;
      if (k1 == k10 && k2 == k20) out.sigma0 = term;
    }
  }
  out.sigma_star = total - out.sigma0;
  out.cls = dist_omega(f, theta).to_double() < x_eps / std::sqrt(R) ? ThetaClass::near
                                                                    : ThetaClass::far;
  return out;
}

Real smooth_cutoff_tail(const FieldCtx& f, const SmoothWeights& w) {
  double c = (1 + std::abs(f.trace_t / 2.0)) / static_cast<double>(f.im_omega());
  double box = c / w.delta.to_double() *
               std::pow(static_cast<double>(w.x), w.epsilon / 2);
  long long L = static_cast<long long>(std::floor(box));
  if (L > 10'000'000) throw BoundTooLarge("cutoff tail: index bound too long");
  Real pi = real_pi();
  Real d2 = to_real(w.delta) * to_real(w.delta);
  Real SL = 1;
  for (long long j = L; j >= 1; --j) SL += 2 * exp(-pi * d2 * j * j);
  // one-sided mass beyond the box edge, summed without cancellation
  Real TL = 0;
  Real floor_term = ldexp(Real(1), -400);
  for (long long j = L + 1; j <= L + 100'000'000; ++j) {
    Real t = exp(-pi * d2 * j * j);
    TL += t;
    if (t < floor_term) break;
  }
  return 4 * SL * TL + 4 * TL * TL;
}

namespace {

// sin(rho t) / t with the removable point handled by series in u = rho t.
double sinc_rho(double rho, double t) {
  double u = rho * t;
  if (std::abs(u) < 1e-3) {
    double u2 = u * u;
    return rho * (1 - u2 / 6 * (1 - u2 / 20 * (1 - u2 / 42)));
  }
  return std::sin(u) / t;
}

template <typename F>
double simpson_rec(const F& fn, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
  double m = (a + b) / 2;
  double lm = (a + m) / 2, rm = (m + b) / 2;
  double flm = fn(lm), frm = fn(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps)
    return left + right + (left + right - whole) / 15;
  return simpson_rec(fn, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson_rec(fn, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

// panel-per-unit-length adaptive Simpson; eps is the absolute target for the
// whole interval
template <typename F>
double integrate(const F& fn, double a, double b, double eps) {
  int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
  double h = (b - a) / panels, acc = 0;
  for (int i = 0; i < panels; ++i) {
    double lo = a + i * h, hi = lo + h;
    double flo = fn(lo), fhi = fn(hi), fm = fn((lo + hi) / 2);
    double whole = (hi - lo) / 6 * (flo + 4 * fm + fhi);
    acc += simpson_rec(fn, lo, hi, flo, fm, fhi, whole, eps / panels, 40);
  }
  return acc;
}

}  // namespace

PerronResult perron_indicator(double gamma, double rho, double T) {
  if (!(gamma > 0) || !(rho > 0)) throw ParamError("perron: gamma, rho must be positive");
  if (gamma == rho) throw EqualArguments("perron: gamma and rho must differ");
  if (T < 1) throw ParamError("perron: T must be >= 1");
  auto f_re = [&](double t) { return std::cos(gamma * t) * sinc_rho(rho, t); };
  auto f_im = [&](double t) { return std::sin(gamma * t) * sinc_rho(rho, t); };
  PerronResult out;
  out.integral = 2 * integrate(f_re, 0, T, 1e-8) / M_PI;
  double imag = integrate(f_im, -T, T, 1e-8) / M_PI;
  if (std::abs(imag) >= 1e-8)
    throw CheckError("perron: imaginary part failed to cancel");
  out.err_bound = 4.0 / (T * std::abs(gamma - rho));
  return out;
}

WeightPair weight_eval(const SmoothWeights& w, const RingElt& z) {
  const FieldCtx& f = w.field;
  Real pi = real_pi();
  Real de = to_real(w.delta);
  Real fN = exp(-pi * Real(norm(f, z)) / Real(w.N));
  CoordsT<128> c = mul_elt_coords(f, z, w.alpha);
  Real W1 = wdelta_direct(to_real(c.im.frac()), de, pi);
  Real W2 = wdelta_direct(to_real((c.re + c.im * f.xi2).frac()), de, pi);
  if (w.delta.to_double() <= 0.3) {
    Real cap = 1 + ldexp(Real(1), -40);
    if (W1 > cap || W2 > cap)
      throw CheckError("weight: theta kernel exceeded 1 + 2^-40");
  }
  WeightPair out;
  out.w = static_cast<double>(de * de * fN);
  out.wtilde = static_cast<double>(fN * W1 * W2);
  return out;
}

}  // namespace iqlab
