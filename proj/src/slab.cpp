#include "ebseq/slab.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ebseq/errors.hpp"

namespace ebseq {

namespace {
constexpr double inv_pi = 0.3183098861837906715377675;
constexpr double log_pi = 1.1447298858494001741434273;
}  // namespace

const char* family_name(SlabFamily family) {
  switch (family) {
    case SlabFamily::heavy_tail: return "heavytail";
    case SlabFamily::cauchy: return "cauchy";
    case SlabFamily::laplace: return "laplace";
  }
  return "?";
}

SlabFamily parse_family(const std::string& name) {
  if (name == "heavytail" || name == "heavy_tail") return SlabFamily::heavy_tail;
  if (name == "cauchy") return SlabFamily::cauchy;
  if (name == "laplace") return SlabFamily::laplace;
  throw config_error("unknown slab family: " + name +
                     " (expected heavytail, cauchy, or laplace)");
}

void SlabModel::validate() const {
  if (family == SlabFamily::heavy_tail && !(delta > 0.0 && delta < 2.0))
    throw config_error("heavytail delta must lie in (0, 2)");
  if (family == SlabFamily::laplace && !(scale > 0.0 && std::isfinite(scale)))
    throw config_error("laplace scale must be positive and finite");
  quadrature.validate();
}

double SlabModel::log_slope_bound() const {
  switch (family) {
    case SlabFamily::heavy_tail: return 1.0 + delta;
    case SlabFamily::cauchy: return 1.0;
    case SlabFamily::laplace: return 1.0 / scale;
  }
  return 0.0;
}

std::string SlabModel::describe() const {
  std::ostringstream out;
  out << family_name(family);
  if (family == SlabFamily::heavy_tail) out << "(delta=" << delta << ")";
  if (family == SlabFamily::laplace) out << "(scale=" << scale << ")";
  return out.str();
}

double slab_density(const SlabModel& slab, double u) {
  const double a = std::abs(u);
  switch (slab.family) {
    case SlabFamily::heavy_tail:
      return 0.5 * slab.delta * std::pow(1.0 + a, -1.0 - slab.delta);
    case SlabFamily::cauchy:
      return inv_pi / (1.0 + u * u);
    case SlabFamily::laplace:
      return std::exp(-a / slab.scale) / (2.0 * slab.scale);
  }
  return 0.0;
}

double slab_log_density(const SlabModel& slab, double u) {
  const double a = std::abs(u);
  switch (slab.family) {
    case SlabFamily::heavy_tail:
      return std::log(0.5 * slab.delta) - (1.0 + slab.delta) * std::log1p(a);
    case SlabFamily::cauchy:
      return -log_pi - std::log1p(u * u);
    case SlabFamily::laplace:
      return -a / slab.scale - std::log(2.0 * slab.scale);
  }
  return -std::numeric_limits<double>::infinity();
}

}  // namespace ebseq
