#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iqlab/arith.hpp"
#include "iqlab/dioph.hpp"
#include "iqlab/field.hpp"
#include "iqlab/report.hpp"

namespace iqlab {

/**
 * Sum of e(Im_omega(m*alpha)) over all elements with x <= N(m) <= y,
 * including m = 0 when x = 0.  Fast route: per-row phase recurrence in
 * doubles with exact fixed-point row starts and compensated accumulation.
 * The report compares |sum| against N(omega) sqrt(y) min{sqrt(y),
 * 1/||Re_omega alpha||, 1/||Im_omega alpha||}.
 */
std::pair<std::complex<double>, BoundReport> lin_sum(const FieldCtx& f, const Alpha& alpha,
                                                     long long x, long long y);

/** Reference route: same sum termwise at full working precision. */
CReal lin_sum_exact(const FieldCtx& f, const Alpha& alpha, long long x, long long y);

/**
 * min{M, 1/||Re_omega(n alpha)||, 1/||Im_omega(n alpha)||} with the
 * convention 1/0 = +infinity, so exact lattice hits give M.
 */
double e_weight(const FieldCtx& f, const Alpha& alpha, const RingElt& n, double M);

/** Elements with lo <= N(n) < hi, 1 <= lo < hi. */
struct RangeSpec {
  long long lo{1}, hi{2};
};

/**
 * S = sum of e_weight over all elements in the range, with two reports:
 * one against (1 + C^2 N(omega)^2 x / N(q)) (M + N(q) N(omega) log M),
 * and, when x <= N(q)/(12 C N(omega))^2, one against
 * N(q) N(omega) log(N(q) N(omega)).
 */
std::pair<double, std::vector<BoundReport>> avg_sum(const FieldCtx& f, const Alpha& alpha,
                                                    const RangeSpec& range, double M,
                                                    const Approximation& ap);

/**
 * The index transformation (j1, j2) -> l = (xi2 j1 - j2) - j1 omega over
 * |j1| < J1, |j2| < J2, (j1, j2) != (0, 0).  For any rho with coordinates
 * (x1, x2), Im_omega(l rho) = -j1 x1 - j2 x2 exactly.  Construction checks
 * the size bounds: at most 9 J1 J2 entries, 1 <= N(l) < 5 N(omega)^2 (J1+J2)^2.
 */
struct IndexSet {
  int J1{1}, J2{1};
  struct Entry {
    RingElt l;
    int j1, j2;
  };
  std::vector<Entry> elements;
};
IndexSet index_set(const FieldCtx& f, int J1, int J2);

/** How the bounded coefficients a_m (and sign of b_n) are chosen. */
enum class CoeffMode {
  ones,          // a_m = b_n = 1
  zeros,         // a_m = 0, b_n = 1
  random_signs,  // independent +-1 from the seed
  aligned,       // a_m aligns the strongest l-component, b_n = 1
};

struct BilinearParams {
  int J1{2}, J2{2};
  long long x{1024};
  bool type1{true};
  long long M{32};          // Type I: N(m) < M
  double mu{5.0 / 14.0};    // Type II: x^mu < N(m) < x^{mu+kappa}
  double kappa{0.5};
  CoeffMode mode{CoeffMode::ones};
  std::uint64_t seed{1};
};

struct BilinearResult {
  double value{0};
  bool range_empty{false};
};

/**
 * F(J1, J2) = sum over l in the index set of |sum_{m,n} a_m b_n
 * e(Im_omega(l m n alpha))| where (m, n) runs over all element pairs with
 * x/2 <= N(mn) < x and the Type I/II restriction on N(m).
 */
BilinearResult bilinear_F(const FieldCtx& f, const Alpha& alpha, const BilinearParams& p);

enum class Section5Kind { type1, type2, gsum };

struct Section5Params {
  Approximation ap;
  long long x{1024};
  int J1{2}, J2{2};
  long long M{32};        // type1
  double mu{5.0 / 14.0};  // type2
  double kappa{0.5};
  int J{12};              // gsum
  Fx128 delta;            // gsum
  std::uint64_t seed{1};
};

/**
 * Evaluate the named quantity with worst-case-ish coefficients (max of the
 * aligned choice and seeded random signs) and report it against the closed
 * bound with implied constant 1:
 *   type1: C^2 N(w)^7 ((J1+J2)^2 x/N(q) + (J1+J2)^2 sqrt(x M) + sqrt(x) N(q))
 *   type2: C N(w)^{7/2} (J1 J2 x^{(1+mu+kappa)/2} + sqrt(J1 J2) (
 *          (J1+J2) x/sqrt(N(q)) + (J1+J2) x^{1-mu/4}
 *          + sqrt(N(q)) x^{(2+mu+kappa)/4}))
 *   gsum:  C^2 N(w)^3 (sqrt(N(q)) + N(q)/J + x/sqrt(N(q)) + x/J)
 * where gsum is the boundary-weight sum over k in {Re, Im}, both signs of
 * delta, and the Type I pair range with unit coefficients.
 */
BoundReport verify_section5_bound(const FieldCtx& f, const Alpha& alpha, Section5Kind kind,
                                  const Section5Params& p);

}  // namespace iqlab
