#include "ebseq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ebseq/errors.hpp"

namespace ebseq {

void QuadratureSpec::validate() const {
  if (node_count < 2 || node_count > 100000)
    throw config_error("quadrature node_count out of range [2, 100000]");
  if (!(truncation_radius >= 5.0 && truncation_radius <= 100.0))
    throw config_error("quadrature truncation_radius out of range [5, 100]");
  if (!(relative_tolerance > 0 && relative_tolerance <= 1e-3))
    throw config_error("quadrature relative_tolerance out of range (0, 1e-3]");
}

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw config_error("Gauss-Legendre order must be >= 1");
  nodes_.resize(static_cast<std::size_t>(order));
  weights_.resize(static_cast<std::size_t>(order));
  const int n = order;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess; Newton on the recurrence converges in a
    // handful of steps.
    double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[static_cast<std::size_t>(i)] = -x;
    nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
    weights_[static_cast<std::size_t>(i)] = w;
    weights_[static_cast<std::size_t>(n - 1 - i)] = w;
  }
}

const GaussLegendre& GaussLegendre::of(int order) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex lock;
  std::lock_guard<std::mutex> hold(lock);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, GaussLegendre(order)).first;
  return it->second;
}

std::vector<double> panel_edges(double lo, double hi, double max_width,
                                std::span<const double> splits) {
  if (!(hi > lo)) return {lo, hi};
  std::vector<double> anchors{lo};
  for (double s : splits)
    if (s > lo && s < hi) anchors.push_back(s);
  anchors.push_back(hi);
  std::sort(anchors.begin(), anchors.end());
  std::vector<double> edges{lo};
  for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
    const double a = anchors[k], b = anchors[k + 1];
    const double len = b - a;
    if (len <= 0) continue;
    const int parts = std::max(1, static_cast<int>(std::ceil(len / max_width)));
    for (int j = 1; j < parts; ++j) edges.push_back(a + len * j / parts);
    edges.push_back(b);
  }
  return edges;
}

std::vector<double> panel_edges(double lo, double hi, double max_width,
                                std::initializer_list<double> splits) {
  return panel_edges(lo, hi, max_width,
                     std::span<const double>(splits.begin(), splits.size()));
}

}  // namespace ebseq
