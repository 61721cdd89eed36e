#pragma once

#include <vector>

#include "ebseq/slab.hpp"

namespace ebseq {

// Marginal density g = phi * gamma of one observation drawn from the slab,
// plus the derived quantities everything downstream consumes:
//   log_ratio(x) = log g(x) - log phi(x)
//   score_b(x)   = g(x)/phi(x) - 1
//   score_b(x,a) = score_b(x) / (1 + a * score_b(x))   (computed stably)
//   deriv_ratio  = g'(x)/g(x)
//
// g and g'/g are tabulated on a uniform grid over [0, x_max] (both are even /
// odd, so negative x reflects) with 4-point cubic interpolation; beyond x_max
// evaluation falls back to direct quadrature.  Interpolation error is ~1e-12
// at the default grid step, far below the quadrature tolerance.
class ConvolvedDensity {
 public:
  explicit ConvolvedDensity(SlabModel slab, double x_max = 12.0);

  const SlabModel& slab() const { return slab_; }
  double x_max() const { return x_max_; }

  double operator()(double x) const;  // g(x)
  double log_g(double x) const;
  double log_ratio(double x) const;   // log g - log phi, increasing in |x|
  double deriv_ratio(double x) const; // g'(x)/g(x), odd in x

  // B(x) = g/phi - 1; may overflow to +inf far in the tail, by design.
  double score_b(double x) const;
  // B(x, alpha) = B/(1 + alpha B): stable for all magnitudes of log_ratio,
  // approaches 1/alpha as x -> inf and -1/(1-alpha+...) ~ B(x) near 0.
  double score_b_alpha(double x, double alpha) const;
  // log(1 + alpha B(x)), the per-observation marginal log-likelihood shift.
  double log_one_plus_alpha_b(double x, double alpha) const;

  // Direct composite Gauss-Legendre evaluation with one-step Richardson-style
  // refinement until the requested relative tolerance holds (throws
  // numerical_error with the achieved error otherwise).
  static double convolve(const SlabModel& slab, double x);
  static double convolve_dg(const SlabModel& slab, double x);   // g'
  static double convolve_d2g(const SlabModel& slab, double x);  // g''

 private:
  double grid_log_g(double ax) const;
  double grid_deriv_ratio(double ax) const;

  SlabModel slab_;
  double x_max_ = 0.0;
  double step_ = 0.0;
  std::vector<double> log_g_;       // log g(k * step_), k = 0..
  std::vector<double> deriv_ratio_; // g'/g at k * step_
};

}  // namespace ebseq
