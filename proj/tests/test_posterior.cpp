#include <doctest.h>

#include <cmath>
#include <vector>

#include "ebseq/convolved.hpp"
#include "ebseq/credible.hpp"
#include "ebseq/errors.hpp"
#include "ebseq/normal.hpp"
#include "ebseq/posterior.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/rng.hpp"
#include "ebseq/thresholds.hpp"
#include "ebseq/tilted.hpp"

#include "oracle_values.hpp"

using namespace ebseq;

namespace {

SlabModel heavy(double delta) {
  SlabModel s;
  s.family = SlabFamily::heavy_tail;
  s.delta = delta;
  return s;
}

SlabModel cauchy_slab() {
  SlabModel s;
  s.family = SlabFamily::cauchy;
  return s;
}

SlabModel laplace_slab() {
  SlabModel s;
  s.family = SlabFamily::laplace;
  return s;
}

const ConvolvedDensity& ht02() {
  static ConvolvedDensity g(heavy(0.2), 14.0);
  return g;
}

const ConvolvedDensity& ht05() {
  static ConvolvedDensity g(heavy(0.5), 14.0);
  return g;
}

const ConvolvedDensity& ht1() {
  static ConvolvedDensity g(heavy(1.0), 14.0);
  return g;
}

}  // namespace

TEST_CASE("slab weight: basic shape and stability") {
  const ConvolvedDensity& g = ht05();
  CHECK(slab_weight(g, 3.0, 0.0) == 0.0);
  CHECK(slab_weight(g, 3.0, 1.0) == 1.0);
  // increasing in |x| and in alpha, symmetric
  CHECK(slab_weight(g, 2.0, 0.1) == doctest::Approx(slab_weight(g, -2.0, 0.1)));
  CHECK(slab_weight(g, 3.0, 0.1) > slab_weight(g, 1.0, 0.1));
  CHECK(slab_weight(g, 3.0, 0.2) > slab_weight(g, 3.0, 0.1));
  // huge x: a -> 1 without NaN
  CHECK(slab_weight(g, 500.0, 1e-6) == doctest::Approx(1.0));
  CHECK(std::isfinite(slab_weight(g, 500.0, 1e-300)));
}

TEST_CASE("slab weight: sandwich bounds") {
  // alpha g / (g v phi) <= a <= min(1, alpha/(1-alpha) g/phi)
  for (const ConvolvedDensity* gp : {&ht02(), &ht1()}) {
    const ConvolvedDensity& g = *gp;
    for (double alpha : {0.01, 0.3, 0.9}) {
      for (double x = 0.0; x <= 12.0; x += 0.37) {
        const double a = slab_weight(g, x, alpha);
        const double gg = g(x);
        const double ph = normal_pdf(x);
        const double lower = alpha * gg / std::max(gg, ph);
        const double upper =
            std::min(1.0, alpha / (1.0 - alpha) * std::exp(g.log_ratio(x)));
        CHECK(a >= lower - 1e-12);
        CHECK(a <= upper + 1e-12);
      }
    }
  }
}

TEST_CASE("slab weight: gaussian closeness above tau") {
  // 1 - a(x) <= exp(-(|x|-tau)^2 / 2) for |x| > tau, alpha <= alpha0
  for (const ConvolvedDensity* gp : {&ht05(), &ht1()}) {
    const ConvolvedDensity& g = *gp;
    const double alpha0 = alpha0_of(g);
    for (double alpha : {0.001, 0.05, 0.5}) {
      if (alpha > alpha0) continue;
      const double tau = tau_of(g, alpha);
      for (double x = tau + 0.05; x <= 12.0; x += 0.5) {
        const double slack = std::exp(-0.5 * (x - tau) * (x - tau));
        CHECK(1.0 - slab_weight(g, x, alpha) <= slack + 1e-12);
      }
    }
  }
}

TEST_CASE("tilted cdf: frozen value, monotonicity, symmetry pair") {
  const ConvolvedDensity& g02 = ht02();
  CHECK(tilted_cdf(g02, 1.7, 0.0) ==
        doctest::Approx(oracle::ht02_cdf0_x17).epsilon(1e-8));
  const TiltedDistribution td(ht05(), 2.0);
  double prev = -1.0;
  for (double u = td.lo(); u <= td.hi(); u += 0.5) {
    const double c = td.cdf(u);
    CHECK(c >= prev - 1e-15);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    prev = c;
  }
  // mass matches g up to quadrature error
  CHECK(td.mass() == doctest::Approx(ht05()(2.0)).epsilon(1e-9));
  // reflection: Gamma_x(u) = 1 - Gamma_{-x}(-u)
  const TiltedDistribution tm(ht05(), -2.0);
  for (double u : {-1.0, 0.0, 0.8, 2.5}) {
    CHECK(td.cdf(u) == doctest::Approx(1.0 - tm.cdf(-u)).epsilon(1e-9));
  }
}

TEST_CASE("tilted mean and variance identities via g derivatives") {
  const SlabModel s = heavy(1.0);
  const ConvolvedDensity& g = ht1();
  const double x = 3.0;
  const TiltedDistribution td(g, x);
  CHECK(td.mean() == doctest::Approx(oracle::ht1_tilted_mean_3).epsilon(1e-9));
  CHECK(td.mean() == doctest::Approx(x + g.deriv_ratio(x)).epsilon(1e-9));
  // second moment about x: E(u-x)^2 = g''/g + 1
  const double gg = ConvolvedDensity::convolve(s, x);
  const double d2 = ConvolvedDensity::convolve_d2g(s, x);
  const double second_about_x = d2 / gg + 1.0;
  const double direct = td.moment_abs(2.0, x);
  CHECK(direct == doctest::Approx(second_about_x).epsilon(1e-8));
  // shift rule: E(u - c)^2 = E(u-x)^2 + 2(x-c) E(u-x) + (x-c)^2
  const double c = 0.7;
  const double first_about_x = g.deriv_ratio(x);
  const double shifted =
      second_about_x + 2.0 * (x - c) * first_about_x + (x - c) * (x - c);
  CHECK(td.moment_abs(2.0, c) == doctest::Approx(shifted).epsilon(1e-8));
}

TEST_CASE("tilted q-moments: frozen oracle points") {
  const TiltedDistribution a(ht05(), 2.0);
  CHECK(a.moment_abs(0.5, 0.7) ==
        doctest::Approx(oracle::ht05_x2_q05_c07).epsilon(1e-7));
  const ConvolvedDensity laplace_g(laplace_slab());
  const TiltedDistribution b(laplace_g, 1.3);
  CHECK(b.moment_abs(2.0, 0.0) ==
        doctest::Approx(oracle::laplace_x13_q2_c0).epsilon(1e-7));
  const ConvolvedDensity cauchy_g(cauchy_slab());
  const TiltedDistribution c(cauchy_g, 4.0);
  CHECK(c.moment_abs(1.0, 3.5) ==
        doctest::Approx(oracle::cauchy_x4_q1_c35).epsilon(1e-7));
}

TEST_CASE("tilted q-moment growth envelope in |x - center|") {
  // E|u-c|^q <= C (|x-c|^q + 1) and >= c0 (|x-c|^q + 1); recorded C = 3, c0 = 0.05
  for (double q : {0.5, 1.0, 2.0}) {
    for (const ConvolvedDensity* gp : {&ht02(), &ht1()}) {
      for (double x : {0.0, 1.0, 3.0, 6.0, 10.0}) {
        const TiltedDistribution td(*gp, x);
        for (double c : {0.0, x / 2.0, x}) {
          const double m = td.moment_abs(q, c);
          const double envelope = std::pow(std::abs(x - c), q) + 1.0;
          CHECK(m <= 3.0 * envelope);
          CHECK(m >= 0.05 * envelope);
        }
      }
    }
  }
}

TEST_CASE("tilted quantile inverts the cdf") {
  TiltedDistribution td(ht05(), 2.5);
  for (double p : {0.05, 0.3, 0.5, 0.9, 0.99}) {
    const double u = td.quantile(p);
    CHECK(td.cdf(u) == doctest::Approx(p).epsilon(2e-3));
  }
  CHECK(td.quantile(0.0) == td.lo());
}

TEST_CASE("posterior median: odd, monotone, pinned zero region") {
  const ConvolvedDensity& g = ht05();
  for (double alpha : {0.005, 0.05, 0.3}) {
    const double t = t_of(g, alpha);
    // zero exactly on |x| <= t (up to 1% of t around the boundary)
    CHECK(posterior_median(g, 0.99 * t, alpha) == 0.0);
    CHECK(posterior_median(g, -0.99 * t, alpha) == 0.0);
    CHECK(posterior_median(g, 1.01 * t, alpha) > 0.0);
    CHECK(posterior_median(g, -1.01 * t, alpha) < 0.0);
    CHECK(posterior_median(g, 0.0, alpha) == 0.0);
    // odd (exactly, by construction) and monotone nondecreasing
    double prev = 0.0;
    for (double x = 0.0; x <= 12.0; x += 0.25) {
      const double m = posterior_median(g, x, alpha);
      CHECK(m == -posterior_median(g, -x, alpha));
      CHECK(m >= prev - 1e-9);
      CHECK(m >= 0.0);
      CHECK(m <= x + 1e-12);
      prev = m;
    }
  }
}

TEST_CASE("posterior median: bounded shrinkage x - t - b <= median <= x") {
  // recorded slack b = 2 across families / alphas on the working grid
  const double b = 2.0;
  for (const ConvolvedDensity* gp : {&ht02(), &ht05(), &ht1()}) {
    for (double alpha : {0.001, 0.01, 0.1, 0.5}) {
      const double t = t_of(*gp, alpha);
      for (double x = 0.0; x <= 12.0; x += 0.375) {
        const double m = posterior_median(*gp, x, alpha);
        CHECK(m <= x + 1e-12);
        CHECK(m >= std::max(0.0, x - t - b) - 1e-9);
      }
    }
  }
}

TEST_CASE("posterior median solves its quantile equation when non-zero") {
  const ConvolvedDensity& g = ht1();
  const double alpha = 0.05;
  for (double x : {4.0, 6.0, 9.0}) {
    const double m = posterior_median(g, x, alpha);
    REQUIRE(m > 0.0);
    const double a = slab_weight(g, x, alpha);
    // P(theta <= m-) >= 1/2 and P(theta <= m) >= 1/2 for the mixed posterior:
    // at the solution, (1-a) + a Gamma_x(m) = 1/2 + (1-a) adjustments; the
    // defining equation is a (1 - Gamma_x(m)) = 1/2
    const double gap = a * (1.0 - tilted_cdf(g, x, m)) - 0.5;
    CHECK(std::abs(gap) < 1e-8);
  }
}

TEST_CASE("posterior mean: formula and MC agreement") {
  const ConvolvedDensity& g = ht1();
  const double alpha = 0.1, x = 5.0;
  const double pm = posterior_mean(g, x, alpha);
  CHECK(pm == doctest::Approx(slab_weight(g, x, alpha) * (x + g.deriv_ratio(x)))
                  .epsilon(1e-12));
  // Monte Carlo with exact posterior draws
  const std::vector<double> xs{x};
  const long draws = 60000;
  KahanSum sum, sumsq;
  for (long j = 0; j < draws; ++j) {
    const std::vector<double> d =
        posterior_draw(g, xs, alpha, 2024, static_cast<std::uint64_t>(j));
    sum.add(d[0]);
    sumsq.add(d[0] * d[0]);
  }
  const double mc = sum.value() / draws;
  const double var = sumsq.value() / draws - mc * mc;
  const double se = std::sqrt(var / draws);
  CHECK(std::abs(pm - mc) < 3.0 * se);
}

TEST_CASE("posterior mean is odd and shrinks") {
  const ConvolvedDensity& g = ht05();
  for (double alpha : {0.02, 0.4}) {
    for (double x : {0.5, 2.0, 4.0, 8.0}) {
      const double m = posterior_mean(g, x, alpha);
      CHECK(m == -posterior_mean(g, -x, alpha));
      CHECK(std::abs(m) <= std::abs(x) + 1e-12);
    }
    CHECK(posterior_mean(g, 0.0, alpha) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("coordinate_posterior bundles the pieces") {
  const ConvolvedDensity& g = ht05();
  const CoordinatePosterior cp = coordinate_posterior(g, 4.0, 0.08);
  CHECK(cp.x == 4.0);
  CHECK(cp.alpha == 0.08);
  CHECK(cp.slab_weight == doctest::Approx(slab_weight(g, 4.0, 0.08)));
  CHECK(cp.median == doctest::Approx(posterior_median(g, 4.0, 0.08)));
  CHECK(cp.mean == doctest::Approx(posterior_mean(g, 4.0, 0.08)));
}

TEST_CASE("coordinate radius: definition and reflection invariance") {
  const ConvolvedDensity& g = ht05();
  const double alpha = 0.07, q = 1.3;
  for (double x : {0.4, 2.2, 5.5}) {
    for (double c : {0.0, 0.9, x}) {
      const double a = slab_weight(g, x, alpha);
      const double direct = (1.0 - a) * std::pow(std::abs(c), q) +
                            a * TiltedDistribution(g, x).moment_abs(q, c);
      CHECK(coordinate_radius_q(g, x, alpha, q, c) ==
            doctest::Approx(direct).epsilon(1e-10));
      // exact reflection
      CHECK(coordinate_radius_q(g, -x, alpha, q, -c) ==
            coordinate_radius_q(g, x, alpha, q, c));
    }
  }
}

TEST_CASE("total radius equals the sum of per-coordinate radii bit for bit") {
  const ConvolvedDensity& g = ht05();
  const double alpha = 0.12, q = 2.0;
  const std::vector<double> xs{-4.2, 0.3, 7.7};
  std::vector<double> medians;
  const double total = total_radius_q(g, xs, alpha, q, &medians);
  REQUIRE(medians.size() == 3);
  KahanSum manual;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(medians[i] == posterior_median(g, xs[i], alpha));
    manual.add(coordinate_radius_q(g, xs[i], alpha, q, medians[i]));
  }
  CHECK(total == manual.value());
}

TEST_CASE("posterior guards") {
  const ConvolvedDensity& g = ht05();
  CHECK_THROWS_AS(slab_weight(g, 1.0, -0.1), config_error);
  CHECK_THROWS_AS(slab_weight(g, 1.0, 1.1), config_error);
  CHECK_THROWS_AS(coordinate_radius_q(g, 1.0, 0.5, 2.5, 0.0), config_error);
  std::vector<double> xs{1.0};
  CHECK_THROWS_AS(total_radius_q(g, xs, 0.5, 0.0), config_error);
}
