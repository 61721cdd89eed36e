#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace ebseq {

struct QuadratureSpec {
  int node_count = 200;            // Gauss-Legendre nodes per panel at the base level
  double truncation_radius = 10.0; // integrate the Gaussian factor over [x-R, x+R]
  double relative_tolerance = 1e-9;
  void validate() const;  // throws config_error
};

// Gauss-Legendre nodes/weights on [-1,1]; instances cached per order.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);
  static const GaussLegendre& of(int order);

  int order() const { return static_cast<int>(nodes_.size()); }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k)
      acc += weights_[k] * f(mid + half * nodes_[k]);
    return half * acc;
  }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Sorted panel edges covering [lo, hi]: interior split points forced in, then
// every segment subdivided to width <= max_width.
std::vector<double> panel_edges(double lo, double hi, double max_width,
                                std::initializer_list<double> splits = {});
std::vector<double> panel_edges(double lo, double hi, double max_width,
                                std::span<const double> splits);

template <class F>
double integrate_panels(F&& f, std::span<const double> edges,
                        const GaussLegendre& rule) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k)
    acc += rule.integrate(f, edges[k], edges[k + 1]);
  return acc;
}

}  // namespace ebseq
