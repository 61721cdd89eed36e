#include "ebseq/convolved.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ebseq/errors.hpp"
#include "ebseq/normal.hpp"
#include "ebseq/quadrature.hpp"

namespace ebseq {

namespace {

// g(x) = int phi(x-u) gamma(u) du plus first two derivatives of the Gaussian
// factor, integrated over [x-R, x+R] with the slab kink at u = 0 forced onto
// a panel edge.  `moment` selects 1, (u-x), or (u-x)^2 - 1 factors (0th, 1st,
// 2nd derivative of phi up to sign).
double convolve_once(const SlabModel& slab, double x, int moment,
                     double panel_width, int nodes) {
  const double R = slab.quadrature.truncation_radius;
  const auto edges = panel_edges(x - R, x + R, panel_width, {0.0});
  const auto& rule = GaussLegendre::of(nodes);
  auto f = [&](double u) {
    const double base = normal_pdf(x - u) * slab_density(slab, u);
    switch (moment) {
      case 0: return base;
      case 1: return (u - x) * base;               // g'
      default: {
        const double d = u - x;
        return (d * d - 1.0) * base;               // g''
      }
    }
  };
  return integrate_panels(f, edges, rule);
}

double convolve_refined(const SlabModel& slab, double x, int moment) {
  slab.validate();
  const int nodes = slab.quadrature.node_count;
  const double tol = slab.quadrature.relative_tolerance;
  double width = 2.0;
  double prev = convolve_once(slab, x, moment, width, nodes);
  double achieved = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 4; ++level) {
    width *= 0.5;
    const double cur = convolve_once(slab, x, moment, width, nodes);
    const double scale = std::max({std::abs(prev), std::abs(cur), 1e-300});
    achieved = std::abs(cur - prev) / scale;
    if (achieved <= tol) return cur;
    prev = cur;
  }
  std::ostringstream msg;
  msg << "slab convolution failed to converge at x=" << x
      << " (achieved relative error " << achieved << ")";
  throw numerical_error(msg.str(), achieved);
}

// 4-point Lagrange interpolation on a uniform grid with parity reflection at
// zero; values beyond the table are the caller's problem.
enum class Parity { even, odd };

double interp_uniform(const std::vector<double>& table, double t, Parity parity) {
  const long n = static_cast<long>(table.size());
  long j = static_cast<long>(std::floor(t));
  j = std::clamp<long>(j, 0, n - 3);
  const double w = t - static_cast<double>(j);
  auto at = [&](long k) {
    if (k >= 0) return table[static_cast<std::size_t>(k)];
    const double v = table[static_cast<std::size_t>(-k)];
    return parity == Parity::even ? v : -v;
  };
  const double wm = w + 1.0, w1 = w - 1.0, w2 = w - 2.0;
  return at(j - 1) * (-w * w1 * w2 / 6.0) + at(j) * (wm * w1 * w2 / 2.0) +
         at(j + 1) * (-wm * w * w2 / 2.0) + at(j + 2) * (wm * w * w1 / 6.0);
}

constexpr double cache_step = 0.005;
constexpr int cache_rule_order = 32;

}  // namespace

ConvolvedDensity::ConvolvedDensity(SlabModel slab, double x_max)
    : slab_(std::move(slab)) {
  slab_.validate();
  if (!(x_max >= 1.0 && x_max <= 1e4))
    throw config_error("convolved density x_max out of range [1, 1e4]");
  x_max_ = std::max(x_max, 12.0);
  step_ = cache_step;
  // two extra points past x_max so the 4-point stencil never runs off the end
  const std::size_t count = static_cast<std::size_t>(std::ceil(x_max_ / step_)) + 3;
  log_g_.resize(count);
  deriv_ratio_.resize(count);
  const double R = slab_.quadrature.truncation_radius;
  const auto& rule = GaussLegendre::of(cache_rule_order);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = static_cast<double>(i) * step_;
    const auto edges = panel_edges(x - R, x + R, 1.0, {0.0});
    double g = 0.0, dg = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      g += rule.integrate(
          [&](double u) { return normal_pdf(x - u) * slab_density(slab_, u); },
          edges[k], edges[k + 1]);
      dg += rule.integrate(
          [&](double u) {
            return (u - x) * normal_pdf(x - u) * slab_density(slab_, u);
          },
          edges[k], edges[k + 1]);
    }
    log_g_[i] = std::log(g);
    deriv_ratio_[i] = dg / g;
  }
}

double ConvolvedDensity::grid_log_g(double ax) const {
  return interp_uniform(log_g_, ax / step_, Parity::even);
}

double ConvolvedDensity::grid_deriv_ratio(double ax) const {
  return interp_uniform(deriv_ratio_, ax / step_, Parity::odd);
}

double ConvolvedDensity::log_g(double x) const {
  const double ax = std::abs(x);
  if (ax <= x_max_) return grid_log_g(ax);
  return std::log(convolve(slab_, ax));
}

double ConvolvedDensity::operator()(double x) const { return std::exp(log_g(x)); }

double ConvolvedDensity::log_ratio(double x) const {
  return log_g(x) + 0.5 * x * x + half_log_two_pi;
}

double ConvolvedDensity::deriv_ratio(double x) const {
  const double ax = std::abs(x);
  double r;
  if (ax <= x_max_) {
    r = grid_deriv_ratio(ax);
  } else {
    r = convolve_dg(slab_, ax) / convolve(slab_, ax);
  }
  return x < 0 ? -r : r;
}

double ConvolvedDensity::score_b(double x) const { return std::expm1(log_ratio(x)); }

double ConvolvedDensity::score_b_alpha(double x, double alpha) const {
  const double L = log_ratio(x);
  // B/(1+aB) = -expm1(-L) / (a + (1-a) exp(-L)); exp(-L) <= exp(-L(0)) stays
  // modest, so this form never meets inf/inf.
  return -std::expm1(-L) / (alpha + (1.0 - alpha) * std::exp(-L));
}

double ConvolvedDensity::log_one_plus_alpha_b(double x, double alpha) const {
  const double L = log_ratio(x);
  if (L < 300.0) return std::log1p(alpha * std::expm1(L));
  return L + std::log(alpha + (1.0 - alpha) * std::exp(-L));
}

double ConvolvedDensity::convolve(const SlabModel& slab, double x) {
  return convolve_refined(slab, x, 0);
}

double ConvolvedDensity::convolve_dg(const SlabModel& slab, double x) {
  return convolve_refined(slab, x, 1);
}

double ConvolvedDensity::convolve_d2g(const SlabModel& slab, double x) {
  return convolve_refined(slab, x, 2);
}

}  // namespace ebseq
