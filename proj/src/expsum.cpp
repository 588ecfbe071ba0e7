#include "iqlab/expsum.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "iqlab/errors.hpp"

namespace iqlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Compensated accumulators; summation order is fixed by the callers, so
// results are bit-reproducible.
struct Kahan {
  double s{0}, c{0};
  void add(double x) {
    double y = x - c, t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

struct KahanC {
  Kahan re, im;
  void add(double r, double i) {
    re.add(r);
    im.add(i);
  }
  void add(const std::complex<double>& z) { add(z.real(), z.imag()); }
  std::complex<double> value() const { return {re.s, im.s}; }
  double abs() const { return std::hypot(re.s, im.s); }
};

std::complex<double> cis2pi(double t) {
  double a = kTwoPi * t;
  return {std::cos(a), std::sin(a)};
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Reproducible +-1 draw attached to one element.
double pm_one(std::uint64_t seed, std::uint64_t tag, const RingElt& n) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(tag ^ splitmix64(
                        static_cast<std::uint64_t>(n.n1) * 0x9e3779b97f4a7c15ull +
                        static_cast<std::uint64_t>(n.n2))));
  return (h & 1) ? 1.0 : -1.0;
}

// First index in the norm-sorted element list with norm >= v.
std::size_t norm_lower(const std::vector<EltNorm>& elts, long long v) {
  return static_cast<std::size_t>(
      std::lower_bound(elts.begin(), elts.end(), v,
                       [](const EltNorm& e, long long w) { return e.norm < w; }) -
      elts.begin());
}

}  // namespace

std::pair<std::complex<double>, BoundReport> lin_sum(const FieldCtx& f, const Alpha& alpha,
                                                     long long x, long long y) {
  if (x < 0 || y < x) throw ParamError("lin_sum: need 0 <= x <= y");
  const Fx128 are = alpha.w128.re, aim = alpha.w128.im;
  const std::complex<double> w = cis2pi(aim.frac().to_double());
  Kahan sre, sim;
  long long rows = norm_row_count(f, y);
  for (long long n2 = -rows; n2 <= rows; ++n2) {
    RowBounds outer = norm_row_range(f, y, n2);
    if (outer.empty) continue;
    long long segs[2][2];
    int nseg = 0;
    if (x >= 1) {
      RowBounds inner = norm_row_range(f, x - 1, n2);
      if (inner.empty) {
        segs[nseg][0] = outer.lo, segs[nseg][1] = outer.hi, ++nseg;
      } else {
        if (outer.lo < inner.lo) segs[nseg][0] = outer.lo, segs[nseg][1] = inner.lo - 1, ++nseg;
        if (inner.hi < outer.hi) segs[nseg][0] = inner.hi + 1, segs[nseg][1] = outer.hi, ++nseg;
      }
    } else {
      segs[nseg][0] = outer.lo, segs[nseg][1] = outer.hi, ++nseg;
    }
    Fx128 base = are * n2 + aim * (n2 * f.xi2);
    for (int si = 0; si < nseg; ++si) {
      long long lo = segs[si][0], hi = segs[si][1];
      std::complex<double> z = cis2pi((base + aim * lo).frac().to_double());
      long long since = 0;
      for (long long n1 = lo; n1 <= hi; ++n1, ++since) {
        if (since == 2048) {  // cap recurrence drift well below the phase budget
          z = cis2pi((base + aim * n1).frac().to_double());
          since = 0;
        }
        sre.add(z.real());
        sim.add(z.imag());
        z *= w;
      }
    }
  }
  std::complex<double> total(sre.s, sim.s);

  double sy = std::sqrt(static_cast<double>(y));
  double mn = sy;
  Fx128 dre = are.dist_to_int(), dim = aim.dist_to_int();
  if (!dre.is_zero()) mn = std::min(mn, 1.0 / dre.to_double());
  if (!dim.is_zero()) mn = std::min(mn, 1.0 / dim.to_double());
  double rhs = f.norm_omega * sy * mn;
  if (rhs <= 0) rhs = 1;  // y = 0 leaves only the m = 0 term
  nlohmann::json params;
  params["d"] = f.d;
  params["x"] = x;
  params["y"] = y;
  params["alpha"] = alpha.label;
  return {total, make_report(std::abs(total), rhs, params)};
}

CReal lin_sum_exact(const FieldCtx& f, const Alpha& alpha, long long x, long long y) {
  if (x < 0 || y < x) throw ParamError("lin_sum_exact: need 0 <= x <= y");
  const Fx128 are = alpha.w128.re, aim = alpha.w128.im;
  CReal acc{Real(0), Real(0)};
  long long rows = norm_row_count(f, y);
  for (long long n2 = -rows; n2 <= rows; ++n2) {
    RowBounds outer = norm_row_range(f, y, n2);
    if (outer.empty) continue;
    RowBounds inner{0, -1, true};
    if (x >= 1) inner = norm_row_range(f, x - 1, n2);
    Fx128 base = are * n2 + aim * (n2 * f.xi2);
    for (long long n1 = outer.lo; n1 <= outer.hi; ++n1) {
      if (!inner.empty && n1 >= inner.lo && n1 <= inner.hi) continue;
      acc += cis(to_real((base + aim * n1).frac()));
    }
  }
  return acc;
}

double e_weight(const FieldCtx& f, const Alpha& alpha, const RingElt& n, double M) {
  if (M < 2) throw ParamError("e_weight: M must be >= 2");
  CoordsT<128> c = mul_elt_coords(f, n, alpha.w128);
  double v = M;
  Fx128 d1 = c.re.dist_to_int(), d2 = c.im.dist_to_int();
  if (!d1.is_zero()) v = std::min(v, 1.0 / d1.to_double());
  if (!d2.is_zero()) v = std::min(v, 1.0 / d2.to_double());
  return v;
}

std::pair<double, std::vector<BoundReport>> avg_sum(const FieldCtx& f, const Alpha& alpha,
                                                    const RangeSpec& range, double M,
                                                    const Approximation& ap) {
  if (M < 2) throw ParamError("avg_sum: M must be >= 2");
  if (range.lo < 1 || range.hi <= range.lo) throw ParamError("avg_sum: bad range");
  Kahan s;
  for (const EltNorm& e : enumerate_with_norms(f, range.hi - 1)) {
    if (e.norm < range.lo) continue;
    RingElt base{e.n1, e.n2};
    for (int k = 0; k < f.unit_count; ++k)
      s.add(e_weight(f, alpha, ring_mul(f, f.units[k], base), M));
  }
  double x = static_cast<double>(range.hi);
  double nq = static_cast<double>(norm(f, ap.q));
  double nw = static_cast<double>(f.norm_omega);
  nlohmann::json params;
  params["d"] = f.d;
  params["lo"] = range.lo;
  params["hi"] = range.hi;
  params["M"] = M;
  params["q_norm"] = norm(f, ap.q);
  params["C"] = ap.C;
  std::vector<BoundReport> reports;
  reports.push_back(make_report(
      s.s, (1 + ap.C * ap.C * nw * nw * x / nq) * (M + nq * nw * std::log(M)), params));
  if (x <= nq / std::pow(12 * ap.C * nw, 2))
    reports.push_back(make_report(s.s, nq * nw * std::log(nq * nw), params));
  return {s.s, reports};
}

IndexSet index_set(const FieldCtx& f, int J1, int J2) {
  if (J1 < 1 || J2 < 1) throw ParamError("index_set: J1, J2 must be >= 1");
  IndexSet out;
  out.J1 = J1;
  out.J2 = J2;
  long long nb = 5 * f.norm_omega * f.norm_omega * (J1 + J2) * (J1 + J2);
  for (int j1 = -(J1 - 1); j1 <= J1 - 1; ++j1) {
    for (int j2 = -(J2 - 1); j2 <= J2 - 1; ++j2) {
      if (j1 == 0 && j2 == 0) continue;
      RingElt l{static_cast<long long>(f.xi2) * j1 - j2, -j1};
      long long nl = norm(f, l);
      if (nl < 1 || nl >= nb) throw CheckError("index_set: norm bound violated");
      out.elements.push_back({l, j1, j2});
    }
  }
  if (out.elements.size() > static_cast<std::size_t>(9) * J1 * J2)
    throw CheckError("index_set: count bound violated");
  return out;
}

namespace {

struct BilinearRange {
  long long mlo, mhi;  // inclusive norm range for m
  bool empty;
};

BilinearRange bilinear_m_range(const BilinearParams& p) {
  if (p.x < 3) throw ParamOutOfRange("bilinear range: x must be >= 3");
  long long mlo, mhi;
  if (p.type1) {
    if (p.M < 1 || p.M > p.x) throw ParamOutOfRange("bilinear range: need 1 <= M <= x");
    mlo = 1;
    mhi = std::min(p.M - 1, p.x - 1);
  } else {
    if (!(p.mu > 0 && p.mu <= 1)) throw ParamOutOfRange("bilinear range: mu outside (0,1]");
    if (!(p.kappa > 0 && p.kappa <= 0.5))
      throw ParamOutOfRange("bilinear range: kappa outside (0,1/2]");
    double lo = std::pow(static_cast<double>(p.x), p.mu);
    double hi = std::pow(static_cast<double>(p.x), std::min(1.0, p.mu + p.kappa));
    mlo = static_cast<long long>(std::floor(lo)) + 1;
    mhi = std::min<long long>(static_cast<long long>(std::ceil(hi)) - 1, p.x - 1);
  }
  return {mlo, mhi, mlo > mhi};
}

// Walk every element pair (m, n) with N(m) in [mlo, mhi] and
// x/2 <= N(mn) < x, accumulating, for the current m, the inner sums
// S_m[e] = sum_n b_n e(-j1 x1 - j2 x2) for each index entry e; after each
// m the fold callback consumes S_m.  Returns true if any pair was visited.
template <typename Fold>
bool scan_bilinear(const FieldCtx& f, const Alpha& alpha, const BilinearParams& p,
                   const IndexSet& L, const std::vector<EltNorm>& elts, long long mlo,
                   long long mhi, bool random_b, Fold&& fold) {
  const int maxj = 16;
  if (p.J1 > maxj || p.J2 > maxj) throw ParamError("bilinear: J1, J2 capped at 16");
  std::array<std::complex<double>, 2 * maxj + 1> pow1, pow2;
  std::vector<KahanC> sm(L.elements.size());
  bool any = false;
  std::size_t mbeg = norm_lower(elts, mlo), mend = norm_lower(elts, mhi + 1);
  for (std::size_t mi = mbeg; mi < mend; ++mi) {
    RingElt mc{elts[mi].n1, elts[mi].n2};
    long long nm = elts[mi].norm;
    long long nlo = (p.x + 2 * nm - 1) / (2 * nm);
    long long nhi = (p.x - 1) / nm;
    if (nlo > nhi) continue;
    std::size_t nbeg = norm_lower(elts, nlo), nend = norm_lower(elts, nhi + 1);
    if (nbeg >= nend) continue;
    for (int ku = 0; ku < f.unit_count; ++ku) {
      RingElt m_elt = ring_mul(f, f.units[ku], mc);
      CoordsT<128> mac = mul_elt_coords(f, m_elt, alpha.w128);
      for (auto& a : sm) a = KahanC{};
      for (std::size_t ni = nbeg; ni < nend; ++ni) {
        RingElt ncan{elts[ni].n1, elts[ni].n2};
        for (int kv = 0; kv < f.unit_count; ++kv) {
          RingElt n_elt = ring_mul(f, f.units[kv], ncan);
          CoordsT<128> c = mul_elt_coords(f, n_elt, mac);
          double b = random_b ? pm_one(p.seed, 2, n_elt) : 1.0;
          std::complex<double> z1 = cis2pi(-c.re.frac().to_double());
          std::complex<double> z2 = cis2pi(-c.im.frac().to_double());
          pow1[maxj] = pow2[maxj] = {1, 0};
          for (int j = 1; j < p.J1; ++j) {
            pow1[maxj + j] = pow1[maxj + j - 1] * z1;
            pow1[maxj - j] = std::conj(pow1[maxj + j]);
          }
          for (int j = 1; j < p.J2; ++j) {
            pow2[maxj + j] = pow2[maxj + j - 1] * z2;
            pow2[maxj - j] = std::conj(pow2[maxj + j]);
          }
          for (std::size_t e = 0; e < L.elements.size(); ++e) {
            const auto& en = L.elements[e];
            std::complex<double> ph = pow1[maxj + en.j1] * pow2[maxj + en.j2];
            sm[e].add(b * ph.real(), b * ph.imag());
          }
          any = true;
        }
      }
      fold(m_elt, sm);
    }
  }
  return any;
}

}  // namespace

BilinearResult bilinear_F(const FieldCtx& f, const Alpha& alpha, const BilinearParams& p) {
  BilinearRange r = bilinear_m_range(p);
  if (r.empty) return {0.0, true};
  IndexSet L = index_set(f, p.J1, p.J2);
  if (L.elements.empty()) return {0.0, false};
  std::vector<EltNorm> elts = enumerate_with_norms(f, p.x - 1);
  std::vector<KahanC> acc(L.elements.size());
  bool any = false;

  if (p.mode == CoeffMode::aligned) {
    // First pass: find the index entry carrying the most aligned mass.
    std::vector<Kahan> mass(L.elements.size());
    any = scan_bilinear(f, alpha, p, L, elts, r.mlo, r.mhi, false,
                        [&](const RingElt&, const std::vector<KahanC>& sm) {
                          for (std::size_t e = 0; e < sm.size(); ++e)
                            mass[e].add(sm[e].abs());
                        });
    if (!any) return {0.0, true};
    std::size_t best = 0;
    for (std::size_t e = 1; e < mass.size(); ++e)
      if (mass[e].s > mass[best].s) best = e;
    // Second pass: unit coefficients a_m that align entry `best`.
    scan_bilinear(f, alpha, p, L, elts, r.mlo, r.mhi, false,
                  [&](const RingElt&, const std::vector<KahanC>& sm) {
                    std::complex<double> sb = sm[best].value();
                    double ab = std::abs(sb);
                    std::complex<double> am =
                        ab > 0 ? std::conj(sb) / ab : std::complex<double>(1, 0);
                    for (std::size_t e = 0; e < sm.size(); ++e)
                      acc[e].add(am * sm[e].value());
                  });
  } else {
    bool random = p.mode == CoeffMode::random_signs;
    bool zero = p.mode == CoeffMode::zeros;
    any = scan_bilinear(f, alpha, p, L, elts, r.mlo, r.mhi, random,
                        [&](const RingElt& m_elt, const std::vector<KahanC>& sm) {
                          double am = zero ? 0.0 : random ? pm_one(p.seed, 1, m_elt) : 1.0;
                          for (std::size_t e = 0; e < sm.size(); ++e) {
                            std::complex<double> v = sm[e].value();
                            acc[e].add(am * v.real(), am * v.imag());
                          }
                        });
    if (!any) return {0.0, true};
  }
  Kahan total;
  for (const KahanC& a : acc) total.add(a.abs());
  return {total.s, false};
}

namespace {

// G-term: boundary weights over the Type-I pair range with unit coefficients.
double gsum_value(const FieldCtx& f, const Alpha& alpha, const Section5Params& p) {
  BilinearParams bp;
  bp.x = p.x;
  bp.type1 = true;
  bp.M = p.M;
  BilinearRange r = bilinear_m_range(bp);
  if (r.empty) return 0.0;
  if (p.J < 1) throw ParamError("gsum: J must be >= 1");
  double big = std::log(2.0 * p.J);
  double J = p.J;
  std::vector<EltNorm> elts = enumerate_with_norms(f, p.x - 1);
  Kahan g;
  auto add_term = [&](const Fx128& v) {
    Fx128 dist = v.dist_to_int();
    double t = big;
    if (!dist.is_zero()) t = std::min(big, 1.0 / (J * dist.to_double()));
    g.add(t);
  };
  std::size_t mbeg = norm_lower(elts, r.mlo), mend = norm_lower(elts, r.mhi + 1);
  for (std::size_t mi = mbeg; mi < mend; ++mi) {
    RingElt mc{elts[mi].n1, elts[mi].n2};
    long long nm = elts[mi].norm;
    long long nlo = (p.x + 2 * nm - 1) / (2 * nm);
    long long nhi = (p.x - 1) / nm;
    if (nlo > nhi) continue;
    std::size_t nbeg = norm_lower(elts, nlo), nend = norm_lower(elts, nhi + 1);
    for (int ku = 0; ku < f.unit_count; ++ku) {
      RingElt m_elt = ring_mul(f, f.units[ku], mc);
      CoordsT<128> mac = mul_elt_coords(f, m_elt, alpha.w128);
      for (std::size_t ni = nbeg; ni < nend; ++ni) {
        RingElt ncan{elts[ni].n1, elts[ni].n2};
        for (int kv = 0; kv < f.unit_count; ++kv) {
          CoordsT<128> c = mul_elt_coords(f, ring_mul(f, f.units[kv], ncan), mac);
          add_term(p.delta - c.re);
          add_term(p.delta + c.re);
          add_term(p.delta - c.im);
          add_term(p.delta + c.im);
        }
      }
    }
  }
  return g.s;
}

}  // namespace

BoundReport verify_section5_bound(const FieldCtx& f, const Alpha& alpha, Section5Kind kind,
                                  const Section5Params& p) {
  double nq = static_cast<double>(norm(f, p.ap.q));
  double C = p.ap.C;
  double nw = static_cast<double>(f.norm_omega);
  double x = static_cast<double>(p.x);
  nlohmann::json params;
  params["d"] = f.d;
  params["x"] = p.x;
  params["q_norm"] = norm(f, p.ap.q);
  params["C"] = C;

  double value = 0, rhs = 1;
  if (kind == Section5Kind::gsum) {
    if (p.delta <= Fx128::from_int(0) || p.delta > Fx128::half())
      throw ParamOutOfRange("gsum: delta outside (0,1/2]");
    value = gsum_value(f, alpha, p);
    rhs = C * C * nw * nw * nw *
          (std::sqrt(nq) + nq / p.J + x / std::sqrt(nq) + x / p.J);
    params["J"] = p.J;
    params["M"] = p.M;
    params["delta"] = p.delta.to_double();
  } else {
    BilinearParams bp;
    bp.J1 = p.J1;
    bp.J2 = p.J2;
    bp.x = p.x;
    bp.type1 = kind == Section5Kind::type1;
    bp.M = p.M;
    bp.mu = p.mu;
    bp.kappa = p.kappa;
    bp.seed = p.seed;
    bp.mode = CoeffMode::aligned;
    BilinearResult aligned = bilinear_F(f, alpha, bp);
    if (aligned.range_empty)
      throw ParamOutOfRange("verify_section5_bound: empty N(m) range");
    bp.mode = CoeffMode::random_signs;
    BilinearResult rnd0 = bilinear_F(f, alpha, bp);
    bp.seed = p.seed + 1;
    BilinearResult rnd1 = bilinear_F(f, alpha, bp);
    value = std::max({aligned.value, rnd0.value, rnd1.value});
    params["J1"] = p.J1;
    params["J2"] = p.J2;
    params["aligned"] = aligned.value;
    params["random_a"] = rnd0.value;
    params["random_b"] = rnd1.value;
    params["range_empty"] = aligned.range_empty;
    double j12 = static_cast<double>(p.J1) * p.J2;
    double jsum = p.J1 + p.J2;
    if (kind == Section5Kind::type1) {
      params["M"] = p.M;
      rhs = C * C * std::pow(nw, 7) *
            (jsum * jsum * x / nq + jsum * jsum * std::sqrt(x * static_cast<double>(p.M)) +
             std::sqrt(x) * nq);
    } else {
      params["mu"] = p.mu;
      params["kappa"] = p.kappa;
      rhs = C * std::pow(nw, 3.5) *
            (j12 * std::pow(x, (1 + p.mu + p.kappa) / 2) +
             std::sqrt(j12) * (jsum * x / std::sqrt(nq) + jsum * std::pow(x, 1 - p.mu / 4) +
                               std::sqrt(nq) * std::pow(x, (2 + p.mu + p.kappa) / 4)));
    }
  }
  return make_report(value, rhs, params);
}

}  // namespace iqlab
