#pragma once

#include <cstdint>
#include <vector>

#include "iqlab/field.hpp"

namespace iqlab {

/**
 * The associate of n whose argument lies in [0, 2*pi/unit_count), decided by
 * exact sign tests on the integer coordinates.  The boundary at argument 0 is
 * included.  Zero is rejected.
 */
RingElt canonical_associate(const FieldCtx& f, const RingElt& n);
bool is_canonical(const FieldCtx& f, const RingElt& n);

/** Packed element + norm used by enumeration and the sieve. */
struct EltNorm {
  int32_t n1, n2;
  int64_t norm;
};

/**
 * For fixed n2, the n1 with N(n1 + n2*omega) <= x form the interval
 * [lo, hi]; empty marks rows the norm ellipse misses.
 */
struct RowBounds {
  long long lo, hi;
  bool empty;
};
RowBounds norm_row_range(const FieldCtx& f, long long x, long long n2);
/** Largest |n2| of any element with N(n) <= x. */
long long norm_row_count(const FieldCtx& f, long long x);

/**
 * All canonical elements with 0 < N(n) <= x, sorted by norm, ties broken by
 * (n2, n1) lexicographically.
 */
std::vector<RingElt> enumerate_by_norm(const FieldCtx& f, long long x);
std::vector<EltNorm> enumerate_with_norms(const FieldCtx& f, long long x);

/** Number of nonzero elements (all associates) with N(n) <= x. */
long long count_elements_up_to(const FieldCtx& f, long long x);

/**
 * Table of prime elements up to a norm bound, one canonical representative
 * per associate class, with a composite-marking bitset over the coordinate
 * box for membership queries.
 */
struct PrimeTable {
  int d{0};
  long long norm_bound{0};
  std::vector<RingElt> primes;          // sorted by (norm, n2, n1)
  std::vector<long long> prime_norms;   // parallel to primes

  long long n2_max{0}, n1_lo{0}, n1_span{0};
  std::vector<uint64_t> composite_bits;

  bool in_box(const RingElt& c) const;
  bool marked_composite(const RingElt& canonical) const;
  /** Primality of an arbitrary nonzero element with N(n) <= norm_bound. */
  bool is_prime(const FieldCtx& f, const RingElt& n) const;
  /** Number of prime classes with norm <= y (y <= norm_bound). */
  long long prime_classes_up_to(long long y) const;
};

/** Sieve of Eratosthenes on the coordinate grid.  x is capped by memory. */
PrimeTable sieve_primes(const FieldCtx& f, long long x);

/** unit * product, with canonical prime factors sorted by (norm, n2, n1). */
struct Factorization {
  RingElt unit{1, 0};
  std::vector<std::pair<RingElt, int>> factors;
};

/**
 * Factor a nonzero element by factoring its norm over the integers, locating
 * the prime elements above each rational prime by norm-form enumeration, and
 * peeling with exact division.  Independent of sieve_primes.
 */
Factorization factor(const FieldCtx& f, const RingElt& n);

/** Canonical primes of norm p (split or ramified); empty when p is inert. */
std::vector<RingElt> primes_above(const FieldCtx& f, long long p);

/** 0 for non-squarefree, otherwise (-1)^(number of prime classes); 1 on units. */
int moebius(const FieldCtx& f, const RingElt& n);

/** Number of ordered k-factorizations of the ideal (n). */
long long d_k(const FieldCtx& f, const RingElt& n, int k);

/**
 * Greatest common divisor up to units, returned canonically.  Computed via
 * factorization of the smaller-norm argument; none of these rings beyond
 * d = -11 is norm-Euclidean, so no remainder division is attempted.
 */
RingElt gcd(const FieldCtx& f, const RingElt& a, const RingElt& b);

/** Number of prime ideals of norm <= x (equals prime class count). */
long long prime_ideal_count(const FieldCtx& f, long long x);

// integer helpers shared by factor() and the tests
bool is_prime_int64(long long n);
std::vector<std::pair<long long, int>> factor_int64(long long n);
long long isqrt_ll(long long v);

}  // namespace iqlab
