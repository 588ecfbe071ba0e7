#pragma once

#include "iqlab/field.hpp"
#include "iqlab/real.hpp"

namespace iqlab {

/**
 * Gaussian smoothing data at scale x: N = x^{1-epsilon}, the radial weight
 * f_N(z) = e^{-pi |z|^2 / N}, the window half-width delta, and the target
 * alpha the periodized kernels are evaluated against.
 */
struct SmoothWeights {
  FieldCtx field;
  long long x{0};
  double epsilon{0};
  double N{0};
  Fx128 delta;
  AlphaCoords alpha;
};

/** Validates x >= 2, 0 < epsilon <= 1/2 and x^{-1000} <= delta <= 1/2. */
SmoothWeights make_smooth_weights(const FieldCtx& f, long long x, double epsilon,
                                  const Fx128& delta, const AlphaCoords& alpha);

/**
 * psi(t) = t - floor(t) - 1/2 against its truncated Fourier expansion
 * sum_{1 <= |j| < J} (2 pi i j)^{-1} e(-jt).  err is the absolute gap; it
 * stays within 2 min{log 2J, 1/(J ||t||)} (calibrated factor 2).
 */
struct SawtoothResult {
  double approx{0}, exact{0}, err{0};
};
SawtoothResult sawtooth_approx(double x, long long J);

/**
 * Window indicator [ ||y alpha||_omega < delta ] against the product
 * expansion 4 delta^2 + 2 delta (Xi_1 + Xi_2) + Xi_1 Xi_2 with
 * Xi_k = psi(-x_k - delta) - psi(-x_k + delta), evaluated in exact fixed
 * point.  boundary marks y whose coordinates land on +-delta + Z, where the
 * two sides may legitimately differ; off the boundary they agree exactly.
 */
struct IndicatorExpansion {
  int lhs{0};
  double rhs{0};
  bool boundary{false};
};
IndicatorExpansion indicator_expansion(const FieldCtx& f, const SmoothWeights& w,
                                       const RingElt& y);

/**
 * The periodized Gaussian kernel evaluated two ways:
 *   direct = sum_n e^{-pi (theta - n)^2 / delta^2}
 *   dual   = delta sum_j e^{-pi delta^2 j^2} e(j theta)
 * Both sums are truncated once the omitted tail is below 2^-120.
 */
struct ThetaPair {
  Real direct, dual;
};
ThetaPair theta_wdelta(double theta, double delta);

enum class ThetaClass { near, far };

/**
 * direct = sum over the whole ring of e^{-pi N(m)/R} e(Im_omega(m theta)),
 * truncated at N(m) <= 200 R.  The unfolded form of the same sum is
 * (R / Im omega) sum_{k in Z^2} exp(-pi R ((k1-v1)^2 + ((k2-v2) -
 * (k1-v1) Re omega)^2 / (Im omega)^2)) with v = (Im_omega theta,
 * Re_omega theta + xi2 Im_omega theta); sigma0 is its term at the nearest
 * lattice point and sigma_star the rest.  cls is near exactly when
 * ||theta||_omega < x_eps / sqrt(R).
 */
struct GaussLatticeSum {
  CReal direct;
  Real sigma0, sigma_star;
  ThetaClass cls{ThetaClass::near};
};
GaussLatticeSum gauss_lattice_sum(const FieldCtx& f, double R, const AlphaCoords& theta,
                                  double x_eps);

/**
 * Mass of e^{-pi delta^2 (j1^2 + j2^2)} outside the box
 * max{|j1|, |j2|} <= c delta^{-1} x^{epsilon/2}, c = (1 + |Re omega|) / Im omega.
 */
Real smooth_cutoff_tail(const FieldCtx& f, const SmoothWeights& w);

/**
 * (1/pi) int_{-T}^{T} e^{i gamma t} sin(rho t) / t dt.  The imaginary part
 * vanishes by symmetry; it is recomputed by quadrature and required to stay
 * below 1e-8.  err_bound = 4 / (T |gamma - rho|) dominates the gap between
 * the integral and the step value [gamma < rho].
 */
struct PerronResult {
  double integral{0}, err_bound{0};
};
PerronResult perron_indicator(double gamma, double rho, double T);

/**
 * w(z) = delta^2 f_N(z) and wtilde(z) = f_N(z) K(Im_omega(z alpha))
 * K(Re_omega(z alpha) + xi2 Im_omega(z alpha)) with K the periodized
 * Gaussian kernel.  For delta <= 0.3 each kernel factor is checked against
 * the cap 1 + 2^-40; wider windows let the kernel exceed it legitimately.
 */
struct WeightPair {
  double w{0}, wtilde{0};
};
WeightPair weight_eval(const SmoothWeights& w, const RingElt& z);

}  // namespace iqlab
