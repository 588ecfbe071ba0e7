#pragma once

#include <functional>
#include <vector>

#include "iqlab/arith.hpp"
#include "iqlab/field.hpp"
#include "iqlab/fixed.hpp"

namespace iqlab {

/**
 * Weight on ring elements with a declared finite support: eval must return
 * zero whenever N(r) > support_bound.  Values are fixed point, so every sum
 * this module takes is exact and the identity checks can demand bit
 * equality.
 */
struct SieveWeight {
  std::function<Fx128(const RingElt&)> eval;
  long long support_bound{0};
};

/**
 * Parameters of one sieve instance.  Primes of norm below z are the ones
 * removed; mu_floor splits prime-tuple products into light (kept for
 * further decomposition) and heavy (summed immediately); M splits the
 * Moebius expansion by the norm of the outer divisor.
 */
struct SieveConfig {
  long long x{0};
  double kappa{0};
  double mu{0};
  long long z{0};         // floor(x^kappa)
  long long mu_floor{0};  // floor(x^mu)
  long long M{0};
  long long support_bound{0};
};

/**
 * Validates x >= 3, 0 < kappa <= 1/2, 0 < mu < 1, x^mu < M <= x, and the
 * support bound; derives z and mu_floor.
 */
SieveConfig make_sieve_config(long long x, double kappa, double mu, long long M,
                              long long support_bound);

/** Canonical primes of norm below z, ascending in the sieve order. */
std::vector<RingElt> sieve_prime_list(const FieldCtx& f, long long z);

/** The fixed total order used on primes: by norm, ties by (n2, n1). */
bool sieve_prec(const FieldCtx& f, const RingElt& a, const RingElt& b);

/**
 * Sum of weight(r) over all nonzero r in the support whose prime factors
 * all have norm >= z.  Units pass vacuously.  Elements are classified by
 * their smallest prime factor norm, taken from factor() and memoized per
 * field.
 */
Fx128 sifted_sum(const FieldCtx& f, const SieveWeight& weight, long long z);

/**
 * The sifted sum against its Moebius expansion: rhs sums
 * mu(m) * sum_n weight(m*n) over squarefree products m of primes below z,
 * enumerated by depth-first search pruned at N(m) > support.  Both routes
 * are exact fixed-point sums, so equal demands bit equality.
 */
struct LegendreCheck {
  Fx128 lhs, rhs;
  bool equal;
};
LegendreCheck legendre_identity_check(const FieldCtx& f, const SieveWeight& weight, long long z);

/** A tuple (p1, ..., ps) of primes below z, strictly decreasing in the sieve order. */
struct SieveTuple {
  std::vector<RingElt> primes;
  RingElt product{1, 0};
  long long norm_product{1};
  bool heavy{false};  // norm_product > mu_floor
};

struct BuchstabLevel {
  int s{0};
  std::vector<SieveTuple> heavy;  // their Moebius-weighted g-sums enter term
  std::vector<SieveTuple> light;  // extended at the next level
  Fx128 term;                     // (-1)^s * sum over the heavy tuples
};

struct BuchstabResult {
  int t{0};
  bool truncated_early{false};  // t below floor(log2 x) + 1
  std::vector<BuchstabLevel> levels;
  Fx128 residual;      // (-1)^t * sum over the level-t light tuples
  Fx128 direct;        // sum of mu(m) g(m) over products m of primes below z
  Fx128 identity_gap;  // direct minus (terms + residual)
};

/**
 * Decomposes the Moebius-weighted sum of g over squarefree products of the
 * primes below z by repeatedly peeling the largest prime.  Each level
 * extends the light tuples of the previous one by a strictly smaller prime
 * and splits the extensions by whether the norm product exceeds mu_floor.
 * A tuple (p1, ..., ps) contributes
 *   sum over squarefree products d of primes below ps of mu(d) g(p1...ps*d).
 * g must vanish whenever N(r) <= mu_floor; a support scan checks this and
 * throws GNotVanishing otherwise.  t_override = 0 takes t = floor(log2 x)
 * + 1, which forces the final light set empty and the residual zero; a
 * smaller t truncates early and is flagged.  The reconstruction from terms
 * and residual matches direct exactly.
 */
BuchstabResult buchstab_decompose(const FieldCtx& f, const SieveConfig& cfg, const SieveWeight& g,
                                  int t_override = 0);

/**
 * Splits sifted_sum(w, z) - sifted_sum(wtilde, z) over the Moebius
 * expansion by the norm of the outer divisor m: s1 collects N(m) < M, s2
 * the rest.  total_check demands s1 + s2 equal the difference of the two
 * sifted sums bit for bit.
 */
struct TypeSplit {
  Fx128 s1, s2;
  Fx128 difference;
  bool total_check;
};
TypeSplit type_split(const FieldCtx& f, const SieveConfig& cfg, const SieveWeight& w,
                     const SieveWeight& wtilde);

}  // namespace iqlab
