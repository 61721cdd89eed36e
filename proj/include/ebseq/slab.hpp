#pragma once

#include <string>

#include "ebseq/quadrature.hpp"

namespace ebseq {

enum class SlabFamily {
  heavy_tail,  // c_delta * (1 + |u|)^(-1-delta), c_delta = delta/2, delta in (0,2)
  cauchy,      // 1 / (pi (1 + u^2))
  laplace,     // exp(-|u|/scale) / (2 scale)
};

const char* family_name(SlabFamily family);
SlabFamily parse_family(const std::string& name);  // throws config_error

struct SlabModel {
  SlabFamily family = SlabFamily::heavy_tail;
  double delta = 1.0;  // heavy_tail tail exponent
  double scale = 1.0;  // laplace scale
  QuadratureSpec quadrature{};

  void validate() const;  // throws config_error on bad parameters

  // sup_u |d/du log density|; finite for every family (heavy_tail: 1+delta,
  // cauchy: 1, laplace: 1/scale).  Reported for diagnostics; nothing at
  // runtime branches on it.
  double log_slope_bound() const;

  std::string describe() const;  // "heavytail(delta=0.5)" etc.
};

double slab_density(const SlabModel& slab, double u);
double slab_log_density(const SlabModel& slab, double u);

}  // namespace ebseq
