#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ebseq/convolved.hpp"
#include "ebseq/credible.hpp"
#include "ebseq/errors.hpp"
#include "ebseq/posterior.hpp"
#include "ebseq/rng.hpp"

using namespace ebseq;

namespace {

SlabModel heavy(double delta) {
  SlabModel s;
  s.family = SlabFamily::heavy_tail;
  s.delta = delta;
  return s;
}

const ConvolvedDensity& ht05() {
  static ConvolvedDensity g(heavy(0.5), 14.0);
  return g;
}

std::vector<double> demo_data() {
  // mix of clear nulls, borderline, and strong signals
  return {0.2, -0.6, 1.1, -0.3, 0.05, 4.5, -5.2, 7.3, 0.9, -1.4, 6.1, 0.0};
}

}  // namespace

TEST_CASE("dq distance: values, symmetry, quasi-triangle") {
  const std::vector<double> a{1.0, -2.0, 0.5};
  const std::vector<double> b{0.0, 1.0, 0.5};
  CHECK(dq_distance(a, b, 1.0) == doctest::Approx(4.0));
  CHECK(dq_distance(a, b, 2.0) == doctest::Approx(10.0));
  CHECK(dq_distance(a, b, 0.5) == doctest::Approx(1.0 + std::sqrt(3.0)));
  CHECK(dq_distance(a, b, 2.0) == dq_distance(b, a, 2.0));
  CHECK(dq_distance(a, a, 1.3) == 0.0);
  const std::vector<double> c{2.0, 0.0, -1.0};
  for (double q : {0.5, 1.0, 1.5, 2.0}) {
    const double cq = std::max(1.0, std::pow(2.0, q - 1.0));
    CHECK(dq_distance(a, c, q) <=
          cq * (dq_distance(a, b, q) + dq_distance(b, c, q)) + 1e-12);
  }
  const std::vector<double> short_vec{1.0};
  CHECK_THROWS_AS(dq_distance(a, short_vec, 1.0), config_error);
}

TEST_CASE("moment ball: structure and spread additivity") {
  const ConvolvedDensity& g = ht05();
  const std::vector<double> xs = demo_data();
  const double alpha = 0.15, q = 2.0, M = 20.0;
  const CredibleBall ball = build_moment_ball(g, xs, q, M, alpha);
  CHECK(ball.kind == BallKind::moment);
  CHECK(ball.q == q);
  CHECK(ball.alpha == alpha);
  CHECK(ball.multiplier == M);
  CHECK(std::isnan(ball.beta));
  REQUIRE(ball.center.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(ball.center[i] == posterior_median(g, xs[i], alpha));
  std::vector<double> medians;
  CHECK(ball.spread == total_radius_q(g, xs, alpha, q, &medians));
  CHECK(ball.radius == M * ball.spread);
  CHECK(ball.diameter_bound() == doctest::Approx(2.0 * 2.0 * ball.radius));
  const CredibleBall b1 = build_moment_ball(g, xs, 0.7, M, alpha);
  CHECK(b1.diameter_bound() == doctest::Approx(2.0 * b1.radius));
}

TEST_CASE("containment is a closed dq ball around the medians") {
  const ConvolvedDensity& g = ht05();
  const std::vector<double> xs = demo_data();
  const CredibleBall ball = build_moment_ball(g, xs, 2.0, 5.0, 0.15);
  CHECK(contains(ball, ball.center));
  // step one coordinate exactly to the boundary: closed ball keeps it inside
  std::vector<double> edge = ball.center;
  edge[0] += std::sqrt(ball.radius);
  CHECK(dq_distance(edge, ball.center, 2.0) == doctest::Approx(ball.radius));
  std::vector<double> outside = ball.center;
  outside[0] += std::sqrt(ball.radius) * 1.0001;
  CHECK_FALSE(contains(ball, outside));
  std::vector<double> wrong_len(xs.size() + 1, 0.0);
  CHECK_THROWS_AS(contains(ball, wrong_len), config_error);
}

TEST_CASE("posterior draws: keyed determinism and spike behaviour") {
  const ConvolvedDensity& g = ht05();
  const std::vector<double> xs = demo_data();
  const double alpha = 0.15;
  const std::vector<double> d0 = posterior_draw(g, xs, alpha, 42, 0);
  const std::vector<double> d0_again = posterior_draw(g, xs, alpha, 42, 0);
  CHECK(d0 == d0_again);
  const std::vector<double> d1 = posterior_draw(g, xs, alpha, 42, 1);
  CHECK(d0 != d1);
  const std::vector<double> e0 = posterior_draw(g, xs, alpha, 43, 0);
  CHECK(d0 != e0);
  // strong spike at a tiny |x| with small alpha: draw is zero almost surely
  const std::vector<double> tiny{0.01};
  int zeros = 0;
  for (int j = 0; j < 200; ++j)
    zeros += posterior_draw(g, tiny, 0.001, 7, j)[0] == 0.0;
  CHECK(zeros > 190);
  // strong signal with moderate alpha: never the spike
  const std::vector<double> big{8.0};
  for (int j = 0; j < 50; ++j) {
    const double v = posterior_draw(g, big, 0.3, 7, j)[0];
    CHECK(v != 0.0);
    CHECK(v > 3.0);
    CHECK(v < 13.0);
  }
}

TEST_CASE("moment ball keeps at least 1 - 1/M posterior mass") {
  const ConvolvedDensity& g = ht05();
  const std::vector<double> xs = demo_data();
  const double alpha = 0.15;
  for (double M : {2.0, 5.0, 20.0}) {
    const CredibleBall ball = build_moment_ball(g, xs, 2.0, M, alpha);
    const double mass = ball_posterior_mass(g, ball, xs, 4000, 11);
    // 3 binomial SEs of slack on the Monte Carlo side
    const double se = std::sqrt(0.25 / 4000.0);
    CHECK(mass >= 1.0 - 1.0 / M - 3.0 * se);
  }
}

TEST_CASE("quantile ball: empirical credibility and dominance at M = 1/beta") {
  const ConvolvedDensity& g = ht05();
  const std::vector<double> xs = demo_data();
  const double alpha = 0.15, q = 2.0, beta = 0.05;
  const CredibleBall qb = build_quantile_ball(g, xs, q, beta, alpha, 3000, 5);
  CHECK(qb.kind == BallKind::quantile);
  CHECK(qb.beta == beta);
  CHECK(std::isnan(qb.multiplier));
  CHECK(qb.spread == total_radius_q(g, xs, alpha, q));
  // the radius is a quantile of genuine posterior dq draws: fresh draws land
  // inside with probability close to 1 - beta
  long inside = 0;
  const long fresh = 2000;
  for (long j = 0; j < fresh; ++j) {
    const std::vector<double> d = posterior_draw(g, xs, alpha, 909, j);
    inside += dq_distance(d, qb.center, q) <= qb.radius;
  }
  const double rate = static_cast<double>(inside) / fresh;
  CHECK(rate > 1.0 - beta - 3.0 * std::sqrt(beta * (1.0 - beta) / fresh));
  // Markov with M = 1/beta is conservative: quantile radius should not exceed it
  const CredibleBall mb = build_moment_ball(g, xs, q, 1.0 / beta, alpha);
  CHECK(qb.radius <= mb.radius);
  CHECK(qb.center == mb.center);
}

TEST_CASE("quantile ball guards") {
  const ConvolvedDensity& g = ht05();
  const std::vector<double> xs = demo_data();
  CHECK_THROWS_AS(build_quantile_ball(g, xs, 2.0, 0.05, 0.15, 999, 1),
                  config_error);
  CHECK_THROWS_AS(build_quantile_ball(g, xs, 2.0, 0.0, 0.15, 2000, 1),
                  config_error);
  CHECK_THROWS_AS(build_moment_ball(g, xs, 2.0, 1.0, 0.15), config_error);
  CHECK_THROWS_AS(build_moment_ball(g, xs, 2.5, 20.0, 0.15), config_error);
}
