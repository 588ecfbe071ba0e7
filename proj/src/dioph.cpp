#include "iqlab/dioph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "iqlab/errors.hpp"

namespace iqlab {

namespace {

// |rho|^2 for fixed-point omega-coordinates, evaluated in Real.
Real abs2_of_coords(const FieldCtx& f, const Coords256& c) {
  return abs2_coords(f, to_real(c.re), to_real(c.im));
}

// Unit u with u * n canonical, applied to a second element.
RingElt apply_canonicalizing_unit(const FieldCtx& f, const RingElt& n, const RingElt& other,
                                  RingElt& n_canon) {
  n_canon = canonical_associate(f, n);
  for (int k = 0; k < f.unit_count; ++k) {
    if (ring_mul(f, f.units[k], n) == n_canon) return ring_mul(f, f.units[k], other);
  }
  throw CheckError("canonicalizing unit not found");
}

// Distance of b to the nearest multiple of n > 0.
long long dist_to_multiple(long long b, long long n) {
  long long r = b % n;
  if (r < 0) r += n;
  return std::min(r, n - r);
}

}  // namespace

std::vector<Approximation> gintner_search(const FieldCtx& f, const Alpha& alpha,
                                          long long qmax_norm, double C_override) {
  if (qmax_norm < 2) throw ParamError("gintner_search: qmax_norm must be >= 2");
  if (C_override < 0) throw ParamError("gintner_search: C must be positive");
  Real c_real = C_override > 0 ? Real(C_override) : f.gintner_c();
  double c_dbl = C_override > 0 ? C_override : f.gintner_c_d();
  Real c_sq = c_real * c_real;
  Real rational_cut = boost::multiprecision::ldexp(Real(1), -200);

  std::vector<Approximation> out;
  std::set<std::tuple<long long, long long, long long, long long>> seen;
  for (const EltNorm& qe : enumerate_with_norms(f, qmax_norm)) {
    if (qe.norm < 2) continue;
    RingElt q{qe.n1, qe.n2};
    Coords256 qa = mul_elt_coords(f, q, alpha.w256);
    RingElt a{qa.re.round_to_ll(), qa.im.round_to_ll()};
    Coords256 diff{qa.re - Fx256::from_int(a.n1), qa.im - Fx256::from_int(a.n2)};
    Real gamma_sq = abs2_of_coords(f, diff) / qe.norm;

    RingElt g = a.is_zero() ? canonical_associate(f, q) : gcd(f, a, q);
    RingElt ar{0, 0}, qr = q;
    if (norm(f, g) > 1) {
      ar = a.is_zero() ? a : *try_div(f, a, g);
      qr = *try_div(f, q, g);
    } else {
      ar = a;
    }
    long long nqr = norm(f, qr);
    if (nqr <= 1) continue;  // a/q is a ring element

    if (gamma_sq < rational_cut)
      throw AlphaLooksRational("gintner_search: alpha - a/q vanishes at N(q)=" +
                               std::to_string(nqr));
    if (gamma_sq * nqr * nqr > c_sq) continue;

    RingElt qc;
    RingElt ac = apply_canonicalizing_unit(f, qr, ar, qc);
    if (!seen.insert({qc.n1, qc.n2, ac.n1, ac.n2}).second) continue;
    out.push_back(Approximation{ac, qc, gamma_sq, c_dbl});
  }
  std::sort(out.begin(), out.end(), [&](const Approximation& x, const Approximation& y) {
    long long nx = norm(f, x.q), ny = norm(f, y.q);
    return std::tie(nx, x.q.n2, x.q.n1, x.a.n2, x.a.n1) <
           std::tie(ny, y.q.n2, y.q.n1, y.a.n2, y.a.n1);
  });
  return out;
}

std::vector<PairViolation> check_lower_bound_static(const FieldCtx& f, long long qmax) {
  if (qmax < 2) throw ParamError("check_lower_bound_static: qmax must be >= 2");
  std::vector<PairViolation> out;
  for (const EltNorm& qe : enumerate_with_norms(f, qmax)) {
    if (qe.norm < 2) continue;
    RingElt q{qe.n1, qe.n2};
    RingElt qbar = conj(f, q);
    long long nq = qe.norm;
    // The ideal (q) meets the n2-axis in strides of h22 and the quotient
    // lattice is covered by {i + j*omega : 0 <= i < h11, 0 <= j < h22}.
    long long h22 = std::gcd(std::abs(q.n2), std::abs(q.n1 + q.n2 * f.xi2));
    long long h11 = nq / h22;
    for (long long i = 0; i < h11; ++i) {
      for (long long j = 0; j < h22; ++j) {
        RingElt b = ring_mul(f, RingElt{i, j}, qbar);
        long long m = std::max(dist_to_multiple(b.n1, nq), dist_to_multiple(b.n2, nq));
        if (m == 0) continue;  // q divides a
        if ((__int128)4 * m * m * f.norm_omega < nq) out.push_back({q, RingElt{i, j}});
      }
    }
  }
  return out;
}

std::vector<RingElt> check_lower_bound_perturbed(const FieldCtx& f, const Alpha& alpha,
                                                 const Approximation& ap, long long nmax) {
  if (nmax < 1) throw ParamError("check_lower_bound_perturbed: nmax must be >= 1");
  long long nq = norm(f, ap.q);
  Real lim = Real(nq) / boost::multiprecision::pow(Real(12) * ap.C * f.norm_omega, 2);
  long long bound = std::min<long long>(nmax, static_cast<long long>(
                                                  boost::multiprecision::floor(lim)));
  std::vector<RingElt> out;
  if (bound < 1) return out;
  Real thr = 1 / (4 * boost::multiprecision::sqrt(Real(nq) * f.norm_omega)) -
             boost::multiprecision::ldexp(Real(1), -80);
  for (const EltNorm& e : enumerate_with_norms(f, bound)) {
    RingElt base{e.n1, e.n2};
    for (int k = 0; k < f.unit_count; ++k) {
      RingElt n = ring_mul(f, f.units[k], base);
      if (try_div(f, ring_mul(f, n, ap.a), ap.q)) continue;  // q | n a excluded
      Coords256 c = mul_elt_coords(f, n, alpha.w256);
      if (to_real(dist_coords(c)) < thr) out.push_back(n);
    }
  }
  return out;
}

long long h_alpha_count(const FieldCtx& f, const Alpha& alpha, long long x,
                        const Fx128& delta) {
  if (delta <= Fx128::from_int(0) || delta > Fx128::half())
    throw ParamError("h_alpha_count: delta must lie in (0, 1/2]");
  if (x <= 0) return 0;
  Fx256 d256 = delta.rescale<256>();
  long long count = 0;
  for (const EltNorm& e : enumerate_with_norms(f, x)) {
    RingElt base{e.n1, e.n2};
    for (int k = 0; k < f.unit_count; ++k) {
      Coords256 c = mul_elt_coords(f, ring_mul(f, f.units[k], base), alpha.w256);
      if (!(dist_coords(c) > d256)) ++count;
    }
  }
  return count;
}

std::pair<long long, BoundReport> h_alpha_count_report(const FieldCtx& f, const Alpha& alpha,
                                                       long long x, const Fx128& delta,
                                                       const Approximation& ap) {
  long long count = h_alpha_count(f, alpha, x, delta);
  double nq = static_cast<double>(norm(f, ap.q));
  double dd = delta.to_double();
  double rhs = (1.0 + static_cast<double>(x) / nq) * (1.0 + dd * dd * nq);
  nlohmann::json params;
  params["d"] = f.d;
  params["x"] = x;
  params["delta"] = dd;
  params["q_norm"] = norm(f, ap.q);
  return {count, make_report(static_cast<double>(count), rhs, params)};
}

VanishingInstance vanishing_instance(const FieldCtx& f, const Approximation& ap) {
  // For C below 1/(12 N(omega)) the x-range would reach N(q) and multiples
  // of q defeat the vanishing claim; the field constant is always large
  // enough, so require it of overrides too.
  if (ap.C * 12 * f.norm_omega < 1)
    throw ParamError("vanishing_instance: C must be at least 1/(12 N(omega))");
  long long nq = norm(f, ap.q);
  Real thr = 1 / (4 * boost::multiprecision::sqrt(Real(nq) * f.norm_omega));
  VanishingInstance vi;
  vi.delta = fx_from_real<128>(thr) - Fx128::from_raw(2);  // strictly below the gap
  Real xlim = Real(nq) / boost::multiprecision::pow(Real(12) * ap.C * f.norm_omega, 2);
  vi.x = static_cast<long long>(boost::multiprecision::floor(xlim));
  return vi;
}

std::pair<long long, double> spacing_square_count(const FieldCtx& f, const Alpha& alpha,
                                                  const Approximation& ap, double cx,
                                                  double cy, const Fx128& delta) {
  long long nq = norm(f, ap.q);
  double qomega = std::sqrt(static_cast<double>(nq) * static_cast<double>(f.norm_omega));
  double diag = std::sqrt(static_cast<double>(nq)) / (12.0 * ap.C * f.norm_omega);
  double h = diag / (2.0 * std::sqrt(2.0));  // half-side from the diagonal
  double imw = static_cast<double>(f.im_omega());
  double half_t = f.trace_t / 2.0;

  Fx256 d256 = delta.rescale<256>();
  long long count = 0;
  long long r2lo = (long long)std::ceil((cy - h) / imw);
  long long r2hi = (long long)std::floor((cy + h) / imw);
  for (long long n2 = r2lo; n2 <= r2hi; ++n2) {
    long long r1lo = (long long)std::ceil(cx - h - half_t * n2);
    long long r1hi = (long long)std::floor(cx + h - half_t * n2);
    for (long long n1 = r1lo; n1 <= r1hi; ++n1) {
      Coords256 c = mul_elt_coords(f, RingElt{n1, n2}, alpha.w256);
      if (!(dist_coords(c) > d256)) ++count;
    }
  }
  double bound = 4.0 * std::pow(1.0 + 4.0 * qomega * delta.to_double(), 2);
  return {count, bound};
}

}  // namespace iqlab
