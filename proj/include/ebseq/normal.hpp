#pragma once

#include <cmath>

namespace ebseq {

inline constexpr double half_log_two_pi = 0.9189385332046727417803297;
inline constexpr double inv_sqrt_two_pi = 0.3989422804014326779399461;
inline constexpr double inv_sqrt_two = 0.7071067811865475244008444;

inline double normal_pdf(double x) { return inv_sqrt_two_pi * std::exp(-0.5 * x * x); }

inline double normal_log_pdf(double x) { return -0.5 * x * x - half_log_two_pi; }

// Phi via erfc keeps full relative accuracy in the lower tail.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * inv_sqrt_two); }

// Upper tail 1 - Phi(x), accurate for large x.
inline double normal_sf(double x) { return 0.5 * std::erfc(x * inv_sqrt_two); }

}  // namespace ebseq
