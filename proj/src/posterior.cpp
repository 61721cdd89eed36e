#include "ebseq/posterior.hpp"

#include <cmath>

#include "ebseq/errors.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/tilted.hpp"

namespace ebseq {

namespace {

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw config_error("mixing weight alpha must lie in [0, 1]");
}

// Positive-part median of the slab component for x >= 0 with a > 1/2:
// solve Gamma_x(m) = 1 - 1/(2a).
double positive_median(const TiltedDistribution& td, double a) {
  const double target = 1.0 - 0.5 / a;
  double lo = 0.0, hi = td.hi();
  for (int iter = 0; iter < 80; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (td.cdf(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double slab_weight(const ConvolvedDensity& g, double x, double alpha) {
  check_alpha(alpha);
  if (alpha <= 0.0) return 0.0;
  if (alpha >= 1.0) return 1.0;
  const double L = g.log_ratio(x);
  return 1.0 / (1.0 + ((1.0 - alpha) / alpha) * std::exp(-L));
}

double tilted_cdf(const ConvolvedDensity& g, double x, double u) {
  return TiltedDistribution(g, x).cdf(u);
}

double posterior_median(const ConvolvedDensity& g, double x, double alpha) {
  if (x < 0.0) return -posterior_median(g, -x, alpha);
  const double a = slab_weight(g, x, alpha);
  // For x >= 0 the slab part puts at least half its mass on [0, inf), so the
  // median is never negative, and it is zero exactly when
  // a (1 - Gamma_x(0)) <= 1/2.  a <= 1/2 settles that without quadrature.
  if (a <= 0.5) return 0.0;
  TiltedDistribution td(g, x);
  const double gamma0 = td.cdf(0.0);
  if (a * (1.0 - gamma0) <= 0.5) return 0.0;
  return positive_median(td, a);
}

double posterior_mean(const ConvolvedDensity& g, double x, double alpha) {
  const double a = slab_weight(g, x, alpha);
  if (a == 0.0) return 0.0;
  return a * (x + g.deriv_ratio(x));
}

CoordinatePosterior coordinate_posterior(const ConvolvedDensity& g, double x,
                                         double alpha) {
  CoordinatePosterior cp;
  cp.x = x;
  cp.alpha = alpha;
  cp.slab_weight = slab_weight(g, x, alpha);
  cp.median = posterior_median(g, x, alpha);
  cp.mean = posterior_mean(g, x, alpha);
  return cp;
}

double coordinate_radius_q(const ConvolvedDensity& g, double x, double alpha,
                           double q, double center) {
  if (!(q > 0.0 && q <= 2.0)) throw config_error("q must lie in (0, 2]");
  // Reflect to the |x| axis (centre flips sign with x) so that symmetric
  // inputs produce bitwise-identical panel sums.
  const double ax = std::abs(x);
  const double c = x < 0.0 ? -center : center;
  const double a = slab_weight(g, ax, alpha);
  const double spike = (1.0 - a) * std::pow(std::abs(c), q);
  if (a == 0.0) return spike;
  TiltedDistribution td(g, ax);
  return spike + a * td.moment_abs(q, c);
}

CoordinateFunctionals coordinate_functionals(const ConvolvedDensity& g, double x,
                                             double alpha, double q) {
  CoordinateFunctionals out;
  const double ax = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double a = slab_weight(g, ax, alpha);
  out.slab_weight = a;
  if (a == 0.0) {
    out.median = 0.0;
    out.radius = 0.0;
    return out;
  }
  TiltedDistribution td(g, ax);
  double med = 0.0;
  if (a > 0.5 && a * (1.0 - td.cdf(0.0)) > 0.5) med = positive_median(td, a);
  out.median = sign * med;
  // moment_abs on the |x| axis with the reflected centre equals the original
  // by symmetry of the pair (x, u) -> (-x, -u).
  out.radius = (1.0 - a) * std::pow(med, q) + a * td.moment_abs(q, med);
  return out;
}

double total_radius_q(const ConvolvedDensity& g, std::span<const double> xs,
                      double alpha, double q,
                      std::vector<double>* medians_out) {
  if (!(q > 0.0 && q <= 2.0)) throw config_error("q must lie in (0, 2]");
  check_alpha(alpha);
  if (medians_out) medians_out->assign(xs.size(), 0.0);
  return chunked_sum(xs.size(), [&](std::size_t i) {
    const auto f = coordinate_functionals(g, xs[i], alpha, q);
    if (medians_out) (*medians_out)[i] = f.median;
    return f.radius;
  });
}

}  // namespace ebseq
