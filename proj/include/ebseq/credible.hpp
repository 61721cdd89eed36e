#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ebseq/convolved.hpp"

namespace ebseq {

// d_q(a, b) = sum_i |a_i - b_i|^q for q in (0, 2].  A metric for q <= 1 and a
// quasi-metric with constant 2^(q-1) for q > 1.
double dq_distance(std::span<const double> a, std::span<const double> b, double q);

enum class BallKind { moment, quantile };

struct CredibleBall {
  BallKind kind = BallKind::moment;
  double q = 2.0;
  std::vector<double> center;  // posterior medians
  double radius = 0.0;         // containment rule: d_q(theta, center) <= radius
  double alpha = 0.0;          // mixing weight the posterior used
  double spread = 0.0;         // v_q(alpha, X), the unblown radius statistic
  double multiplier = 0.0;     // M for moment balls, NaN otherwise
  double beta = 0.0;           // credibility shortfall for quantile balls, NaN otherwise
  // 2 (2^(q-1) v 1) radius: any two members are at most this far apart under
  // the quasi-triangle inequality.
  double diameter_bound() const;
};

// Moment ball: center = medians, radius = M * v_q(alpha, X).  By Markov its
// posterior mass is at least 1 - 1/M; M defaults to 1/beta at call sites that
// are given a credibility level.
CredibleBall build_moment_ball(const ConvolvedDensity& g,
                               std::span<const double> xs, double q, double M,
                               double alpha);

// Quantile ball: radius is the smallest empirical (1-beta)-quantile of
// W_j = d_q(theta^(j), center) over `draws` exact posterior draws
// (order statistic at index ceil(draws * (1-beta))).  Requires draws >= 1000.
CredibleBall build_quantile_ball(const ConvolvedDensity& g,
                                 std::span<const double> xs, double q,
                                 double beta, double alpha, long draws,
                                 std::uint64_t seed);

bool contains(const CredibleBall& ball, std::span<const double> theta);

// One exact posterior draw (spike-or-slab per coordinate, inverse-CDF slab
// sampling), keyed by (seed, draw_index, coordinate).
std::vector<double> posterior_draw(const ConvolvedDensity& g,
                                   std::span<const double> xs, double alpha,
                                   std::uint64_t seed, std::uint64_t draw_index);

// Monte Carlo posterior mass of a ball; used to verify the Markov guarantee.
double ball_posterior_mass(const ConvolvedDensity& g, const CredibleBall& ball,
                           std::span<const double> xs, long draws,
                           std::uint64_t seed);

}  // namespace ebseq
