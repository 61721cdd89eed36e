#pragma once

#include <span>
#include <vector>

#include "ebseq/convolved.hpp"

namespace ebseq {

// Posterior for one coordinate under the two-groups prior
// (1 - alpha) delta_0 + alpha Gamma:
//   non-zero weight  a(x) = alpha g(x) / ((1-alpha) phi(x) + alpha g(x))
//   slab part        Gamma_x = TiltedDistribution(g, x).

double slab_weight(const ConvolvedDensity& g, double x, double alpha);

// Gamma_x(u): CDF of the slab part at u.
double tilted_cdf(const ConvolvedDensity& g, double x, double u);

// Generalised median of the mixed posterior: 0 on a centre interval
// |x| <= t(alpha), then strictly between 0 and x; odd in x.
double posterior_median(const ConvolvedDensity& g, double x, double alpha);

// a(x) * (x + g'(x)/g(x)); O(1) via the cached derivative ratio.
double posterior_mean(const ConvolvedDensity& g, double x, double alpha);

struct CoordinatePosterior {
  double x = 0.0;
  double alpha = 0.0;
  double slab_weight = 0.0;
  double median = 0.0;
  double mean = 0.0;
};

CoordinatePosterior coordinate_posterior(const ConvolvedDensity& g, double x,
                                         double alpha);

// r_q(alpha, center, x) = (1-a)|center|^q + a * integral |u-center|^q dGamma_x.
double coordinate_radius_q(const ConvolvedDensity& g, double x, double alpha,
                           double q, double center);

// Per-coordinate posterior functionals needed by the credible-set code in a
// single tilted-distribution build.
struct CoordinateFunctionals {
  double slab_weight = 0.0;
  double median = 0.0;
  double radius = 0.0;  // r_q at center = median
};

CoordinateFunctionals coordinate_functionals(const ConvolvedDensity& g, double x,
                                             double alpha, double q);

// v_q(alpha, X) = sum_i r_q(alpha, median_i, X_i); the spread statistic the
// credible balls scale by.  Fixed-chunk compensated summation; equals the sum
// of the per-coordinate calls bit for bit.  Optionally writes the medians.
double total_radius_q(const ConvolvedDensity& g, std::span<const double> xs,
                      double alpha, double q,
                      std::vector<double>* medians_out = nullptr);

}  // namespace ebseq
