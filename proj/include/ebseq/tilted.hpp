#pragma once

#include <vector>

#include "ebseq/convolved.hpp"

namespace ebseq {

// Slab component of the posterior at observation x: the distribution with
// density phi(x - u) gamma(u) / g(x) in u.  Panel integrals are precomputed
// once so the CDF (and hence median / quantile bisection) costs one partial
// Gauss-Legendre panel per call.  Support is truncated to [x - R, x + R]
// (R = slab quadrature truncation radius); the discarded mass is bounded by
// the Gaussian tail at R and is far below every tolerance in use.
class TiltedDistribution {
 public:
  TiltedDistribution(const ConvolvedDensity& g, double x);

  double x() const { return x_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // Unnormalised mass integral; equals g(x) up to quadrature error.
  double mass() const { return mass_; }

  double cdf(double u) const;
  double mean() const;
  // integral |u - center|^q dGamma_x(u); the |.|^q kink at `center` gets its
  // own geometrically refined panels.
  double moment_abs(double q, double center) const;

  // Inverse CDF by linear interpolation on a lazily built trapezoid grid;
  // intended for Monte Carlo draws, accuracy ~1e-5 in u.
  double quantile(double p);

 private:
  double density(double u) const;
  void ensure_sample_grid();

  const ConvolvedDensity* g_;
  double x_ = 0.0, lo_ = 0.0, hi_ = 0.0, mass_ = 0.0;
  std::vector<double> edges_;
  std::vector<double> prefix_;  // prefix_[k] = unnormalised mass over [lo, edges_[k]]
  std::vector<double> sample_cdf_;  // lazy trapezoid cumulative for quantile()
  double sample_step_ = 0.0;
};

}  // namespace ebseq
