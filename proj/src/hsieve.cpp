#include "iqlab/hsieve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>

#include "iqlab/errors.hpp"

namespace iqlab {

namespace {

constexpr long long kSupportCap = 100'000'000;
constexpr long long kXCap = 1'000'000'000;
constexpr long long kTupleCap = 2'000'000;

long long checked_support(long long bound) {
  if (bound < 1) throw SupportUnbounded("weight must declare a positive finite support bound");
  if (bound > kSupportCap)
    throw BoundTooLarge("support bound " + std::to_string(bound) + " exceeds the enumeration cap");
  return bound;
}

/** floor(x^e), nudged so powers that are exact integers land on them. */
long long floor_pow(long long x, double e) {
  double v = std::pow(static_cast<double>(x), e);
  return static_cast<long long>(std::floor(v * (1.0 + 4e-13) + 4e-13));
}

int field_index(int d) {
  for (size_t i = 0; i < kHeegnerD.size(); ++i)
    if (kHeegnerD[i] == d) return static_cast<int>(i);
  throw NotClassNumberOne(d);
}

uint64_t pack_elt(const RingElt& r) {
  return (uint64_t(uint32_t(int32_t(r.n1))) << 32) | uint64_t(uint32_t(int32_t(r.n2)));
}

/** Smallest prime factor norm of the class of r; LLONG_MAX on units. */
long long min_prime_norm(const FieldCtx& f, const RingElt& r) {
  static std::array<std::unordered_map<uint64_t, long long>, 9> cache;
  static std::mutex cache_mutex;
  RingElt c = canonical_associate(f, r);
  long long nr = norm(f, c);
  int idx = field_index(f.d);
  uint64_t key = pack_elt(c);
  bool memo = nr <= 1'000'000;
  if (memo) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache[idx].find(key);
    if (it != cache[idx].end()) return it->second;
  }
  Factorization fac = factor(f, c);
  long long best = std::numeric_limits<long long>::max();
  for (const auto& [p, e] : fac.factors) best = std::min(best, norm(f, p));
  if (memo) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache[idx].emplace(key, best);
  }
  return best;
}

/** All nonzero elements with N(r) <= bound, fixed row order. */
template <typename Fn>
void for_all_elements(const FieldCtx& f, long long bound, Fn&& fn) {
  long long rows = norm_row_count(f, bound);
  for (long long n2 = -rows; n2 <= rows; ++n2) {
    RowBounds rb = norm_row_range(f, bound, n2);
    if (rb.empty) continue;
    for (long long n1 = rb.lo; n1 <= rb.hi; ++n1) {
      RingElt r{n1, n2};
      if (r.is_zero()) continue;
      fn(r);
    }
  }
}

/**
 * Squarefree products m of plist[j], j drawn from [0, maxidx), with
 * N(m) <= cap.  fn(m, N(m), sign) where sign is the Moebius value of m.
 * Prime norms ascend, so a too-large factor ends the scan of a branch.
 */
template <typename Fn>
void for_squarefree(const FieldCtx& f, const std::vector<RingElt>& plist,
                    const std::vector<long long>& pnorm, size_t maxidx, long long cap, Fn&& fn) {
  auto rec = [&](auto&& self, size_t i0, const RingElt& m, long long nm, int sign) -> void {
    fn(m, nm, sign);
    for (size_t j = i0; j < maxidx; ++j) {
      if (pnorm[j] > cap / nm) break;
      self(self, j + 1, ring_mul(f, m, plist[j]), nm * pnorm[j], -sign);
    }
  };
  if (cap < 1) return;
  rec(rec, 0, RingElt{1, 0}, 1, +1);
}

std::vector<long long> norms_of(const FieldCtx& f, const std::vector<RingElt>& v) {
  std::vector<long long> out;
  out.reserve(v.size());
  for (const RingElt& p : v) out.push_back(norm(f, p));
  return out;
}

}  // namespace

SieveConfig make_sieve_config(long long x, double kappa, double mu, long long M,
                              long long support_bound) {
  if (x < 3) throw ParamError("x must be at least 3");
  if (x > kXCap) throw BoundTooLarge("x = " + std::to_string(x) + " exceeds the desk cap");
  if (!(kappa > 0.0) || kappa > 0.5) throw ParamOutOfRange("kappa must lie in (0, 1/2]");
  if (!(mu > 0.0) || !(mu < 1.0)) throw ParamOutOfRange("mu must lie in (0, 1)");
  SieveConfig cfg;
  cfg.x = x;
  cfg.kappa = kappa;
  cfg.mu = mu;
  cfg.z = floor_pow(x, kappa);
  cfg.mu_floor = floor_pow(x, mu);
  if (M <= cfg.mu_floor || M > x)
    throw ParamOutOfRange("M = " + std::to_string(M) + " must lie in (x^mu, x]");
  cfg.M = M;
  cfg.support_bound = checked_support(support_bound);
  return cfg;
}

std::vector<RingElt> sieve_prime_list(const FieldCtx& f, long long z) {
  if (z < 1) throw ParamError("z must be at least 1");
  if (z <= 2) return {};
  PrimeTable tab = sieve_primes(f, z - 1);
  return tab.primes;
}

bool sieve_prec(const FieldCtx& f, const RingElt& a, const RingElt& b) {
  long long na = norm(f, a), nb = norm(f, b);
  if (na != nb) return na < nb;
  if (a.n2 != b.n2) return a.n2 < b.n2;
  return a.n1 < b.n1;
}

Fx128 sifted_sum(const FieldCtx& f, const SieveWeight& weight, long long z) {
  long long bound = checked_support(weight.support_bound);
  if (z < 1) throw ParamError("z must be at least 1");
  Fx128 acc{};
  for_all_elements(f, bound, [&](const RingElt& r) {
    if (z > 2 && min_prime_norm(f, r) < z) return;
    acc = acc + weight.eval(r);
  });
  return acc;
}

LegendreCheck legendre_identity_check(const FieldCtx& f, const SieveWeight& weight, long long z) {
  long long bound = checked_support(weight.support_bound);
  Fx128 lhs = sifted_sum(f, weight, z);
  std::vector<RingElt> plist = sieve_prime_list(f, z);
  std::vector<long long> pnorm = norms_of(f, plist);
  Fx128 rhs{};
  for_squarefree(f, plist, pnorm, plist.size(), bound,
                 [&](const RingElt& m, long long nm, int sign) {
                   Fx128 inner{};
                   for_all_elements(f, bound / nm, [&](const RingElt& n) {
                     inner = inner + weight.eval(ring_mul(f, m, n));
                   });
                   rhs = sign > 0 ? rhs + inner : rhs - inner;
                 });
  return {lhs, rhs, lhs == rhs};
}

BuchstabResult buchstab_decompose(const FieldCtx& f, const SieveConfig& cfg, const SieveWeight& g,
                                  int t_override) {
  long long bound = checked_support(g.support_bound);
  if (bound > cfg.support_bound)
    throw ParamError("weight support exceeds the configured support bound");
  if (t_override < 0 || t_override > 64) throw ParamOutOfRange("t must lie in [1, 64]");

  long long scan = std::min(cfg.mu_floor, bound);
  for_all_elements(f, scan, [&](const RingElt& r) {
    if (!g.eval(r).is_zero())
      throw GNotVanishing("g is nonzero at (" + std::to_string(r.n1) + ", " +
                          std::to_string(r.n2) + "), norm " + std::to_string(norm(f, r)) +
                          " <= floor(x^mu)");
  });

  int t_forced = static_cast<int>(std::floor(std::log2(static_cast<double>(cfg.x)))) + 1;
  int t = t_override == 0 ? t_forced : t_override;

  std::vector<RingElt> plist = sieve_prime_list(f, cfg.z);
  std::vector<long long> pnorm = norms_of(f, plist);

  // Moebius-weighted g-sum over extensions of a fixed tuple product.
  auto tuple_sum = [&](const RingElt& prod, long long nprod, size_t lastidx) -> Fx128 {
    Fx128 acc{};
    if (nprod > bound) return acc;
    for_squarefree(f, plist, pnorm, lastidx, bound / nprod,
                   [&](const RingElt& d, long long, int sign) {
                     Fx128 val = g.eval(ring_mul(f, prod, d));
                     acc = sign > 0 ? acc + val : acc - val;
                   });
    return acc;
  };

  BuchstabResult res;
  res.t = t;
  res.truncated_early = t < t_forced;

  struct Node {
    SieveTuple tuple;
    size_t last;  // index of the tuple's smallest prime in plist
  };
  std::vector<Node> frontier;
  frontier.push_back({SieveTuple{}, plist.size()});
  long long tuples_seen = 0;
  Fx128 recon{};

  for (int s = 1; s <= t; ++s) {
    BuchstabLevel level;
    level.s = s;
    Fx128 sub{};
    std::vector<Node> next;
    for (const Node& parent : frontier) {
      for (size_t j = 0; j < parent.last; ++j) {
        if (++tuples_seen > kTupleCap)
          throw BoundTooLarge("sieve decomposition exceeds the tuple cap");
        SieveTuple tup = parent.tuple;
        tup.primes.push_back(plist[j]);
        tup.product = ring_mul(f, tup.product, plist[j]);
        tup.norm_product = tup.norm_product * pnorm[j];
        tup.heavy = tup.norm_product > cfg.mu_floor;
        if (tup.heavy) {
          sub = sub + tuple_sum(tup.product, tup.norm_product, j);
          level.heavy.push_back(std::move(tup));
        } else {
          next.push_back({tup, j});
          level.light.push_back(std::move(tup));
        }
      }
    }
    level.term = (s % 2 == 1) ? -sub : sub;
    recon = recon + level.term;
    res.levels.push_back(std::move(level));
    frontier = std::move(next);
  }

  // Products of t primes have norm at least 2^t, so the final light set is
  // forced empty as soon as t exceeds mu * log2(x).
  if (static_cast<double>(t) > cfg.mu * std::log2(static_cast<double>(cfg.x)) &&
      !frontier.empty())
    throw CheckError("final light tuple set should be empty at this depth");

  Fx128 rsub{};
  for (const Node& node : frontier)
    rsub = rsub + tuple_sum(node.tuple.product, node.tuple.norm_product, node.last);
  res.residual = (t % 2 == 1) ? -rsub : rsub;
  recon = recon + res.residual;

  Fx128 direct{};
  for_squarefree(f, plist, pnorm, plist.size(), bound,
                 [&](const RingElt& m, long long, int sign) {
                   Fx128 val = g.eval(m);
                   direct = sign > 0 ? direct + val : direct - val;
                 });
  res.direct = direct;
  res.identity_gap = direct - recon;
  return res;
}

TypeSplit type_split(const FieldCtx& f, const SieveConfig& cfg, const SieveWeight& w,
                     const SieveWeight& wtilde) {
  long long rw = checked_support(w.support_bound);
  long long rwt = checked_support(wtilde.support_bound);
  if (rw > cfg.support_bound || rwt > cfg.support_bound)
    throw ParamError("weight support exceeds the configured support bound");
  long long bound = std::max(rw, rwt);

  auto diff_eval = [&](const RingElt& r, long long nr) -> Fx128 {
    Fx128 a = nr <= rw ? w.eval(r) : Fx128{};
    Fx128 b = nr <= rwt ? wtilde.eval(r) : Fx128{};
    return a - b;
  };

  std::vector<RingElt> plist = sieve_prime_list(f, cfg.z);
  std::vector<long long> pnorm = norms_of(f, plist);
  TypeSplit res;
  for_squarefree(f, plist, pnorm, plist.size(), bound,
                 [&](const RingElt& m, long long nm, int sign) {
                   Fx128 delta{};
                   for_all_elements(f, bound / nm, [&](const RingElt& n) {
                     delta = delta + diff_eval(ring_mul(f, m, n), nm * norm(f, n));
                   });
                   Fx128 signed_delta = sign > 0 ? delta : -delta;
                   if (nm < cfg.M)
                     res.s1 = res.s1 + signed_delta;
                   else
                     res.s2 = res.s2 + signed_delta;
                 });
  res.difference = sifted_sum(f, w, cfg.z) - sifted_sum(f, wtilde, cfg.z);
  res.total_check = res.s1 + res.s2 == res.difference;
  return res;
}

}  // namespace iqlab
