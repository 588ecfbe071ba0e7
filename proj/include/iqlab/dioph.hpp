#pragma once

#include <utility>
#include <vector>

#include "iqlab/arith.hpp"
#include "iqlab/field.hpp"
#include "iqlab/report.hpp"

namespace iqlab {

/**
 * A lattice approximation a/q to the target alpha.  gamma_abs_sq is
 * |alpha - a/q|^2 at full working precision; the admissibility condition is
 * |alpha - a/q| <= C / N(q) with C the field constant unless overridden.
 * gcd(a, q) is a unit and q is not a unit, so a/q is a non-integral reduced
 * fraction; q is the canonical associate of its class.
 */
struct Approximation {
  RingElt a;
  RingElt q;
  Real gamma_abs_sq;
  double C{0};
};

/**
 * Scan canonical q with 0 < N(q) <= qmax_norm, pair each with the nearest
 * ring element a to q*alpha, reduce by the gcd, and keep admissible pairs.
 * Sorted by N(q), then coordinates; duplicates arising from different
 * unreduced q are removed.  C_override = 0 means use the field constant.
 *
 * Throws AlphaLooksRational if a reduced pair hits alpha to within 2^-100;
 * alpha is then (indistinguishable from) a ratio of ring elements.
 */
std::vector<Approximation> gintner_search(const FieldCtx& f, const Alpha& alpha,
                                          long long qmax_norm, double C_override = 0);

struct PairViolation {
  RingElt q;
  RingElt a;
};

/**
 * Exhaustive test of the reduced-fraction gap: for every canonical q with
 * 2 <= N(q) <= qmax and every residue a mod q with q not dividing a,
 * max(||Re_omega(a/q)||, ||Im_omega(a/q)||) >= 1 / (2 |q| |omega|).
 * The verdict per pair is the exact integer test 4 m^2 N(omega) >= N(q)
 * where m is the max distance of the coordinates of a*conj(q) to the
 * nearest multiples of N(q).  Returns the violating pairs (expected none).
 */
std::vector<PairViolation> check_lower_bound_static(const FieldCtx& f, long long qmax);

/**
 * Perturbed gap: for every n with N(n) <= min(nmax, N(q)/(12 C N(omega))^2)
 * and q not dividing n*a, assert ||n alpha||_omega >= 1/(4|q||omega|) - 2^-80.
 * Scans every element (all associates).  Returns violators (expected none).
 */
std::vector<RingElt> check_lower_bound_perturbed(const FieldCtx& f, const Alpha& alpha,
                                                 const Approximation& ap, long long nmax);

/** #{n != 0 : N(n) <= x, ||n alpha||_omega <= delta} over all elements. */
long long h_alpha_count(const FieldCtx& f, const Alpha& alpha, long long x,
                        const Fx128& delta);

/** Same count, reported against (1 + x/N(q)) (1 + delta^2 N(q)). */
std::pair<long long, BoundReport> h_alpha_count_report(const FieldCtx& f, const Alpha& alpha,
                                                       long long x, const Fx128& delta,
                                                       const Approximation& ap);

/**
 * Largest (x, delta) pair for which the spacing of the multiples of alpha
 * forces the count to vanish for this approximation: delta just below
 * 1/(4|q||omega|) and
 * x = floor(N(q) / (12 C N(omega))^2).  Requires C >= 1/(12 N(omega)) so
 * that the x-range stays below N(q); multiples of q land arbitrarily close
 * to the lattice otherwise and no vanishing statement can hold.
 */
struct VanishingInstance {
  long long x{0};
  Fx128 delta;
};
VanishingInstance vanishing_instance(const FieldCtx& f, const Approximation& ap);

/**
 * Count n inside the axis-aligned square of the complex plane with the given
 * center and the largest admissible size (diagonal N(q)^{1/2}/(12 C N(omega)))
 * satisfying ||n alpha||_omega <= delta, together with the packing bound
 * 4 (1 + 4 |q| |omega| delta)^2.
 */
std::pair<long long, double> spacing_square_count(const FieldCtx& f, const Alpha& alpha,
                                                  const Approximation& ap, double cx,
                                                  double cy, const Fx128& delta);

}  // namespace iqlab
