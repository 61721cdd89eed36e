#include "ebseq/credible.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "ebseq/errors.hpp"
#include "ebseq/posterior.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/rng.hpp"
#include "ebseq/tilted.hpp"

namespace ebseq {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q <= 2.0)) throw config_error("q must lie in (0, 2]");
}

}  // namespace

double dq_distance(std::span<const double> a, std::span<const double> b, double q) {
  check_q(q);
  if (a.size() != b.size())
    throw config_error("dq_distance needs vectors of equal length");
  return chunked_sum(a.size(), [&](std::size_t i) {
    return std::pow(std::abs(a[i] - b[i]), q);
  });
}

double CredibleBall::diameter_bound() const {
  const double quasi = q > 1.0 ? std::pow(2.0, q - 1.0) : 1.0;
  return 2.0 * quasi * radius;
}

CredibleBall build_moment_ball(const ConvolvedDensity& g,
                               std::span<const double> xs, double q, double M,
                               double alpha) {
  check_q(q);
  if (!(M > 1.0)) throw config_error("moment-ball multiplier M must exceed 1");
  CredibleBall ball;
  ball.kind = BallKind::moment;
  ball.q = q;
  ball.alpha = alpha;
  ball.multiplier = M;
  ball.beta = std::numeric_limits<double>::quiet_NaN();
  ball.spread = total_radius_q(g, xs, alpha, q, &ball.center);
  ball.radius = M * ball.spread;
  return ball;
}

bool contains(const CredibleBall& ball, std::span<const double> theta) {
  return dq_distance(theta, ball.center, ball.q) <= ball.radius;
}

std::vector<double> posterior_draw(const ConvolvedDensity& g,
                                   std::span<const double> xs, double alpha,
                                   std::uint64_t seed, std::uint64_t draw_index) {
  std::vector<double> draw(xs.size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = slab_weight(g, xs[i], alpha);
    const double u = uniform_at(seed, draw_index, i, RngStream::posterior_spike);
    if (u < a) {
      TiltedDistribution td(g, xs[i]);
      draw[i] =
          td.quantile(uniform_at(seed, draw_index, i, RngStream::posterior_slab));
    }
  }
  return draw;
}

namespace {

// Shared loop for quantile radii and mass checks: W[j] = d_q(draw_j, center)
// accumulated coordinate by coordinate so each tilted distribution is built
// once.  Draw j, coordinate i sees the keyed streams (seed, j, i, .), matching
// posterior_draw exactly.
std::vector<double> draw_distances(const ConvolvedDensity& g,
                                   std::span<const double> xs,
                                   std::span<const double> center, double q,
                                   double alpha, long draws, std::uint64_t seed) {
  std::vector<double> w(static_cast<std::size_t>(draws), 0.0);
  std::vector<KahanSum> acc(static_cast<std::size_t>(draws));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = slab_weight(g, xs[i], alpha);
    const double spike_term = std::pow(std::abs(center[i]), q);
    std::unique_ptr<TiltedDistribution> td;
    for (long j = 0; j < draws; ++j) {
      const std::size_t jj = static_cast<std::size_t>(j);
      const double u = uniform_at(seed, static_cast<std::uint64_t>(j), i,
                                  RngStream::posterior_spike);
      if (u < a) {
        if (!td) td = std::make_unique<TiltedDistribution>(g, xs[i]);
        const double theta = td->quantile(uniform_at(
            seed, static_cast<std::uint64_t>(j), i, RngStream::posterior_slab));
        acc[jj].add(std::pow(std::abs(theta - center[i]), q));
      } else {
        acc[jj].add(spike_term);
      }
    }
  }
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = acc[j].value();
  return w;
}

}  // namespace

CredibleBall build_quantile_ball(const ConvolvedDensity& g,
                                 std::span<const double> xs, double q,
                                 double beta, double alpha, long draws,
                                 std::uint64_t seed) {
  check_q(q);
  if (!(beta > 0.0 && beta < 1.0))
    throw config_error("quantile-ball beta must lie in (0, 1)");
  if (draws < 1000)
    throw config_error("quantile ball needs at least 1000 posterior draws");
  CredibleBall ball;
  ball.kind = BallKind::quantile;
  ball.q = q;
  ball.alpha = alpha;
  ball.beta = beta;
  ball.multiplier = std::numeric_limits<double>::quiet_NaN();
  ball.spread = total_radius_q(g, xs, alpha, q, &ball.center);

  std::vector<double> w =
      draw_distances(g, xs, ball.center, q, alpha, draws, seed);
  // smallest radius with empirical mass >= 1 - beta: order statistic at
  // ceil(draws (1-beta)) (1-based).
  const double exact = (1.0 - beta) * static_cast<double>(draws);
  long k = static_cast<long>(std::ceil(exact - 1e-9));
  k = std::clamp<long>(k, 1, draws);
  std::nth_element(w.begin(), w.begin() + (k - 1), w.end());
  ball.radius = w[static_cast<std::size_t>(k - 1)];
  return ball;
}

double ball_posterior_mass(const ConvolvedDensity& g, const CredibleBall& ball,
                           std::span<const double> xs, long draws,
                           std::uint64_t seed) {
  if (draws < 1) throw config_error("ball_posterior_mass needs draws >= 1");
  const std::vector<double> w =
      draw_distances(g, xs, ball.center, ball.q, ball.alpha, draws, seed);
  long inside = 0;
  for (double v : w)
    if (v <= ball.radius) ++inside;
  return static_cast<double>(inside) / static_cast<double>(draws);
}

}  // namespace ebseq
