#include "ebseq/tilted.hpp"

#include <algorithm>
#include <cmath>

#include "ebseq/errors.hpp"
#include "ebseq/normal.hpp"
#include "ebseq/quadrature.hpp"

namespace ebseq {

namespace {
constexpr int panel_order = 20;
constexpr double panel_width = 1.0;
constexpr std::size_t sample_grid_size = 2048;
}  // namespace

TiltedDistribution::TiltedDistribution(const ConvolvedDensity& g, double x)
    : g_(&g), x_(x) {
  const double R = g.slab().quadrature.truncation_radius;
  lo_ = x - R;
  hi_ = x + R;
  edges_ = panel_edges(lo_, hi_, panel_width, {0.0});
  prefix_.resize(edges_.size());
  prefix_[0] = 0.0;
  const auto& rule = GaussLegendre::of(panel_order);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < edges_.size(); ++k) {
    acc += rule.integrate([this](double u) { return density(u); }, edges_[k],
                          edges_[k + 1]);
    prefix_[k + 1] = acc;
  }
  mass_ = acc;
  if (!(mass_ > 0.0) || !std::isfinite(mass_))
    throw numerical_error("tilted distribution has degenerate mass", mass_);
}

double TiltedDistribution::density(double u) const {
  return normal_pdf(x_ - u) * slab_density(g_->slab(), u);
}

double TiltedDistribution::cdf(double u) const {
  if (u <= lo_) return 0.0;
  if (u >= hi_) return 1.0;
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), u);
  const std::size_t k = static_cast<std::size_t>(it - edges_.begin()) - 1;
  const auto& rule = GaussLegendre::of(panel_order);
  const double partial =
      u > edges_[k]
          ? rule.integrate([this](double v) { return density(v); }, edges_[k], u)
          : 0.0;
  return (prefix_[k] + partial) / mass_;
}

double TiltedDistribution::mean() const {
  const auto& rule = GaussLegendre::of(panel_order);
  const double m = integrate_panels(
      [this](double u) { return u * density(u); }, edges_, rule);
  return m / mass_;
}

double TiltedDistribution::moment_abs(double q, double center) const {
  if (!(q > 0.0 && q <= 2.0)) throw config_error("moment exponent q must lie in (0, 2]");
  std::vector<double> splits{0.0};
  // |u - c|^q has unbounded derivatives at c for q < 2 (and a kink for q <= 1);
  // geometric panels shrink toward c so fixed-order panels stay accurate.
  if (q < 2.0 && center > lo_ && center < hi_) {
    splits.push_back(center);
    for (double w = 1e-5; w < 1.01; w *= 10.0) {
      splits.push_back(center - w);
      splits.push_back(center + w);
    }
  }
  const auto edges = panel_edges(lo_, hi_, panel_width,
                                 std::span<const double>(splits));
  const auto& rule = GaussLegendre::of(panel_order);
  const double m = integrate_panels(
      [&](double u) { return std::pow(std::abs(u - center), q) * density(u); },
      edges, rule);
  return m / mass_;
}

void TiltedDistribution::ensure_sample_grid() {
  if (!sample_cdf_.empty()) return;
  sample_step_ = (hi_ - lo_) / static_cast<double>(sample_grid_size);
  sample_cdf_.resize(sample_grid_size + 1);
  sample_cdf_[0] = 0.0;
  double prev = density(lo_);
  double acc = 0.0;
  for (std::size_t k = 1; k <= sample_grid_size; ++k) {
    const double cur = density(lo_ + sample_step_ * static_cast<double>(k));
    acc += 0.5 * (prev + cur) * sample_step_;
    sample_cdf_[k] = acc;
    prev = cur;
  }
  const double total = sample_cdf_.back();
  if (!(total > 0.0))
    throw numerical_error("tilted sample grid has zero mass", total);
  for (auto& v : sample_cdf_) v /= total;
}

double TiltedDistribution::quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw config_error("quantile level outside [0, 1]");
  ensure_sample_grid();
  const auto it = std::lower_bound(sample_cdf_.begin(), sample_cdf_.end(), p);
  if (it == sample_cdf_.begin()) return lo_;
  if (it == sample_cdf_.end()) return hi_;
  const std::size_t k = static_cast<std::size_t>(it - sample_cdf_.begin());
  const double c0 = sample_cdf_[k - 1], c1 = sample_cdf_[k];
  const double frac = c1 > c0 ? (p - c0) / (c1 - c0) : 0.0;
  return lo_ + sample_step_ * (static_cast<double>(k - 1) + frac);
}

}  // namespace ebseq
