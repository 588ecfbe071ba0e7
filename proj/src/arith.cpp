#include "iqlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace iqlab {

namespace {

using I128 = __int128;

bool canon_pred(const FieldCtx& f, long long n1, long long n2) {
  if (f.unit_count == 2) return n2 > 0 || (n2 == 0 && n1 > 0);
  // d = -1 and d = -3: the first sector closes at pi/2 resp. pi/3, and in
  // both cases membership reduces to n1 > 0, n2 >= 0 in ring coordinates
  return n1 > 0 && n2 >= 0;
}

// multiply by the primitive unit: i for d=-1, omega for d=-3, -1 otherwise
void rotate_once(const FieldCtx& f, long long& n1, long long& n2) {
  if (f.unit_count == 4) {
    long long t = n1;
    n1 = -n2;
    n2 = t;
  } else if (f.unit_count == 6) {
    long long t = n1;
    n1 = -n2;
    n2 = t + n2;
  } else {
    n1 = -n1;
    n2 = -n2;
  }
}

}  // namespace

RingElt canonical_associate(const FieldCtx& f, const RingElt& n) {
  if (n.is_zero()) throw ZeroElement("canonical_associate");
  long long a = n.n1, b = n.n2;
  for (int i = 0; i < f.unit_count; ++i) {
    if (canon_pred(f, a, b)) return RingElt{a, b};
    rotate_once(f, a, b);
  }
  throw CheckError("canonical_associate: no sector representative found");
}

bool is_canonical(const FieldCtx& f, const RingElt& n) {
  return !n.is_zero() && canon_pred(f, n.n1, n.n2);
}

long long isqrt_ll(long long v) {
  if (v < 0) return -1;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && I128(r) * r > v) --r;
  while (I128(r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Row bounds: for fixed n2, the admissible n1 satisfy
//   n1^2 + t*n2*n1 + (Nw*n2^2 - x) <= 0,
// i.e. n1 in [(-t*n2 - sqrt(D))/2, (-t*n2 + sqrt(D))/2], D = 4x - dss*n2^2
// where dss = 4*Nw - t^2.
RowBounds norm_row_range(const FieldCtx& f, long long x, long long n2) {
  long long dss = 4 * f.norm_omega - f.trace_t * f.trace_t;
  I128 D = I128(4) * x - I128(dss) * n2 * n2;
  if (D < 0) return {0, 0, true};
  long long sq = isqrt_ll(static_cast<long long>(D));
  long long tn = -f.trace_t * n2;
  // floor/ceil of (tn -+ sq)/2
  long long lo = (tn - sq);
  lo = lo >= 0 ? (lo + 1) / 2 : -((-lo) / 2);
  long long hi = (tn + sq);
  hi = hi >= 0 ? hi / 2 : -((-hi + 1) / 2);
  return {lo, hi, lo > hi};
}

long long norm_row_count(const FieldCtx& f, long long x) {
  long long dss = 4 * f.norm_omega - f.trace_t * f.trace_t;
  long long m = isqrt_ll(4 * x / dss);
  while (I128(dss) * m * m > 4 * x) --m;
  return m;
}

std::vector<EltNorm> enumerate_with_norms(const FieldCtx& f, long long x) {
  std::vector<EltNorm> out;
  if (x < 1) return out;
  if (x > (1LL << 34)) throw BoundTooLarge("enumerate: x > 2^34");
  long long m = norm_row_count(f, x);
  for (long long n2 = 0; n2 <= m; ++n2) {
    RowBounds rb = norm_row_range(f, x, n2);
    if (rb.empty) continue;
    for (long long n1 = rb.lo; n1 <= rb.hi; ++n1) {
      if (!canon_pred(f, n1, n2)) continue;
      long long nm = norm(f, RingElt{n1, n2});
      if (nm >= 1 && nm <= x)
        out.push_back(EltNorm{static_cast<int32_t>(n1), static_cast<int32_t>(n2), nm});
    }
  }
  std::sort(out.begin(), out.end(), [](const EltNorm& a, const EltNorm& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    if (a.n2 != b.n2) return a.n2 < b.n2;
    return a.n1 < b.n1;
  });
  return out;
}

std::vector<RingElt> enumerate_by_norm(const FieldCtx& f, long long x) {
  std::vector<EltNorm> packed = enumerate_with_norms(f, x);
  std::vector<RingElt> out;
  out.reserve(packed.size());
  for (const EltNorm& e : packed) out.push_back(RingElt{e.n1, e.n2});
  return out;
}

long long count_elements_up_to(const FieldCtx& f, long long x) {
  if (x < 1) return 0;
  long long m = norm_row_count(f, x);
  long long total = 0;
  for (long long n2 = -m; n2 <= m; ++n2) {
    RowBounds rb = norm_row_range(f, x, n2);
    if (rb.empty) continue;
    total += rb.hi - rb.lo + 1;
    if (n2 == 0) --total;  // exclude the origin
  }
  return total;
}

bool PrimeTable::in_box(const RingElt& c) const {
  return c.n2 >= 0 && c.n2 <= n2_max && c.n1 >= n1_lo && c.n1 < n1_lo + n1_span;
}

bool PrimeTable::marked_composite(const RingElt& c) const {
  size_t idx = static_cast<size_t>(c.n2) * n1_span + static_cast<size_t>(c.n1 - n1_lo);
  return (composite_bits[idx >> 6] >> (idx & 63)) & 1;
}

bool PrimeTable::is_prime(const FieldCtx& f, const RingElt& n) const {
  if (n.is_zero()) return false;
  long long nm = norm(f, n);
  if (nm < 2) return false;
  if (nm > norm_bound) throw BoundTooLarge("PrimeTable::is_prime beyond norm_bound");
  RingElt c = canonical_associate(f, n);
  return in_box(c) && !marked_composite(c);
}

long long PrimeTable::prime_classes_up_to(long long y) const {
  return std::upper_bound(prime_norms.begin(), prime_norms.end(), y) - prime_norms.begin();
}

PrimeTable sieve_primes(const FieldCtx& f, long long x) {
  if (x < 1) throw ParamError("sieve_primes: x must be >= 1");
  if (x > (1LL << 34)) throw BoundTooLarge("sieve_primes: x > 2^34");

  PrimeTable pt;
  pt.d = f.d;
  pt.norm_bound = x;
  pt.n2_max = norm_row_count(f, x);

  long long lo = 0, hi = 0;
  for (long long n2 = 0; n2 <= pt.n2_max; ++n2) {
    RowBounds rb = norm_row_range(f, x, n2);
    if (rb.empty) continue;
    lo = std::min(lo, rb.lo);
    hi = std::max(hi, rb.hi);
  }
  pt.n1_lo = lo;
  pt.n1_span = hi - lo + 1;

  I128 bits = I128(pt.n2_max + 1) * pt.n1_span;
  if (bits > (I128(1) << 33)) throw BoundTooLarge("sieve_primes: coordinate box too large");
  pt.composite_bits.assign(static_cast<size_t>((bits + 63) / 64), 0);

  std::vector<EltNorm> list = enumerate_with_norms(f, x);
  size_t first_nonunit = 0;
  while (first_nonunit < list.size() && list[first_nonunit].norm < 2) ++first_nonunit;

  auto mark = [&](const RingElt& c) {
    size_t idx = static_cast<size_t>(c.n2) * pt.n1_span + static_cast<size_t>(c.n1 - pt.n1_lo);
    pt.composite_bits[idx >> 6] |= uint64_t(1) << (idx & 63);
  };

  for (size_t i = first_nonunit; i < list.size(); ++i) {
    RingElt cand{list[i].n1, list[i].n2};
    if (pt.marked_composite(cand)) continue;
    long long pn = list[i].norm;
    pt.primes.push_back(cand);
    pt.prime_norms.push_back(pn);
    long long kmax = x / pn;
    if (kmax < 2) continue;
    for (size_t j = first_nonunit; j < list.size() && list[j].norm <= kmax; ++j) {
      RingElt prod = ring_mul(f, cand, RingElt{list[j].n1, list[j].n2});
      mark(canonical_associate(f, prod));
    }
  }
  return pt;
}

// ---------------------------------------------------------------- integers

namespace {

using U128 = unsigned __int128;

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(U128(a) * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_int64(long long n) {
  if (n < 2) return false;
  for (long long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                     37ULL}) {
    uint64_t v = powmod_u64(a, d, n);
    if (v == 1 || v == uint64_t(n) - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      v = mulmod_u64(v, v, n);
      if (v == uint64_t(n) - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

long long pollard_rho(long long n) {
  if (n % 2 == 0) return 2;
  uint64_t un = n;
  for (uint64_t c = 1;; ++c) {
    uint64_t x = 2, y = 2, d = 1;
    auto step = [&](uint64_t v) { return (mulmod_u64(v, v, un) + c) % un; };
    while (d == 1) {
      x = step(x);
      y = step(step(y));
      uint64_t diff = x > y ? x - y : y - x;
      d = std::gcd(diff, un);
    }
    if (d != un) return static_cast<long long>(d);
  }
}

void factor_int64_rec(long long n, std::vector<long long>& out) {
  if (n == 1) return;
  if (is_prime_int64(n)) {
    out.push_back(n);
    return;
  }
  long long d = pollard_rho(n);
  factor_int64_rec(d, out);
  factor_int64_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<long long, int>> factor_int64(long long n) {
  if (n < 1) throw ParamError("factor_int64: n must be positive");
  std::vector<long long> ps;
  for (long long p : {2LL, 3LL, 5LL}) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  for (long long p = 7; p <= 1000000 && I128(p) * p <= n; p += 2) {
    while (n % p == 0) {
      ps.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factor_int64_rec(n, ps);
  std::sort(ps.begin(), ps.end());
  std::vector<std::pair<long long, int>> out;
  for (long long p : ps) {
    if (!out.empty() && out.back().first == p)
      ++out.back().second;
    else
      out.push_back({p, 1});
  }
  return out;
}

// ---------------------------------------------------------------- factoring

std::vector<RingElt> primes_above(const FieldCtx& f, long long p) {
  std::vector<RingElt> found;
  long long dss = 4 * f.norm_omega - f.trace_t * f.trace_t;
  for (long long b = 0;; ++b) {
    I128 D = I128(4) * p - I128(dss) * b * b;
    if (D < 0) break;
    long long sq = isqrt_ll(static_cast<long long>(D));
    if (I128(sq) * sq != D) continue;
    for (long long sgn : {1LL, -1LL}) {
      long long num = -f.trace_t * b + sgn * sq;
      if (num % 2 != 0) continue;
      RingElt cand{num / 2, b};
      if (cand.is_zero() || norm(f, cand) != p) continue;
      RingElt c = canonical_associate(f, cand);
      if (std::find(found.begin(), found.end(), c) == found.end()) found.push_back(c);
      if (sq == 0) break;
    }
  }
  std::sort(found.begin(), found.end(), [&](const RingElt& a, const RingElt& b) {
    long long na = norm(f, a), nb = norm(f, b);
    if (na != nb) return na < nb;
    if (a.n2 != b.n2) return a.n2 < b.n2;
    return a.n1 < b.n1;
  });
  return found;
}

Factorization factor(const FieldCtx& f, const RingElt& n) {
  if (n.is_zero()) throw ZeroElement("factor");
  Factorization out;
  long long N = norm(f, n);
  if (N == 1) {
    out.unit = n;
    return out;
  }
  RingElt rem = n;
  for (auto [p, e] : factor_int64(N)) {
    std::vector<RingElt> above = primes_above(f, p);
    if (above.empty()) above.push_back(RingElt{p, 0});  // inert rational prime
    for (const RingElt& q : above) {
      int cnt = 0;
      while (true) {
        auto quo = try_div(f, rem, q);
        if (!quo) break;
        rem = *quo;
        ++cnt;
      }
      if (cnt > 0) out.factors.push_back({q, cnt});
    }
    (void)e;
  }
  if (norm(f, rem) != 1) throw CheckError("factor: nontrivial remainder after peeling");
  out.unit = rem;
  std::sort(out.factors.begin(), out.factors.end(),
            [&](const std::pair<RingElt, int>& a, const std::pair<RingElt, int>& b) {
              long long na = norm(f, a.first), nb = norm(f, b.first);
              if (na != nb) return na < nb;
              if (a.first.n2 != b.first.n2) return a.first.n2 < b.first.n2;
              return a.first.n1 < b.first.n1;
            });
  return out;
}

int moebius(const FieldCtx& f, const RingElt& n) {
  Factorization fac = factor(f, n);
  for (auto& [p, e] : fac.factors)
    if (e >= 2) return 0;
  return fac.factors.size() % 2 == 0 ? 1 : -1;
}

long long d_k(const FieldCtx& f, const RingElt& n, int k) {
  if (k < 1) throw ParamError("d_k: k must be >= 1");
  Factorization fac = factor(f, n);
  long long result = 1;
  for (auto& [p, e] : fac.factors) {
    // binomial(e + k - 1, k - 1)
    long long b = 1;
    for (int i = 1; i <= k - 1; ++i) b = b * (e + i) / i;
    result *= b;
  }
  return result;
}

RingElt gcd(const FieldCtx& f, const RingElt& a, const RingElt& b) {
  if (a.is_zero() && b.is_zero()) throw ParamError("gcd(0, 0) is undefined");
  if (a.is_zero()) return canonical_associate(f, b);
  if (b.is_zero()) return canonical_associate(f, a);
  const RingElt& small = norm(f, a) <= norm(f, b) ? a : b;
  const RingElt& large = norm(f, a) <= norm(f, b) ? b : a;
  RingElt g{1, 0};
  for (auto& [p, e] : factor(f, small).factors) {
    RingElt rem = large;
    int cnt = 0;
    while (cnt < e) {
      auto quo = try_div(f, rem, p);
      if (!quo) break;
      rem = *quo;
      ++cnt;
    }
    for (int i = 0; i < cnt; ++i) g = ring_mul(f, g, p);
  }
  return canonical_associate(f, g);
}

long long prime_ideal_count(const FieldCtx& f, long long x) {
  return static_cast<long long>(sieve_primes(f, x).primes.size());
}

}  // namespace iqlab
