#pragma once

#include <span>
#include <vector>

#include "ebseq/convolved.hpp"

namespace ebseq {

// Threshold trio for mixing weight alpha:
//   zeta(alpha): B(zeta) = 1/alpha        (score threshold)
//   tau(alpha):  a(tau) = 1/2 at alpha ^ alpha0   (weight threshold, clipped)
//   t(alpha):    posterior-median zero/non-zero boundary,
//                a(t) (1 - Gamma_t(0)) = 1/2
// Always tau <= t <= zeta.

double zeta_of(const ConvolvedDensity& g, double alpha);

// alpha0 = 1 / (1 + g(1)/phi(1)); the clip point keeping tau >= 1.
double alpha0_of(const ConvolvedDensity& g);

// Clipped tau: tau(min(alpha, alpha0)).
double tau_of(const ConvolvedDensity& g, double alpha);

double t_of(const ConvolvedDensity& g, double alpha);

struct ThresholdTriple {
  double alpha = 0.0;
  double zeta = 0.0;
  double tau = 0.0;
  double t = 0.0;
};

ThresholdTriple thresholds_of(const ConvolvedDensity& g, double alpha);

// Smallest usable mixing weight for n observations: t(alpha_n) = sqrt(2 log n),
// solved by bisection in alpha (t is decreasing) to |t - target| < 1e-12.
double alpha_n_of(const ConvolvedDensity& g, long n);

// alpha with t(alpha) = target_t, same bisection.
double invert_t(const ConvolvedDensity& g, double target_t);

// Mean-score moments under theta_i = mu:
//   m1(mu, alpha) = E_mu B(X, alpha), m2(mu, alpha) = E_mu B(X, alpha)^2,
//   m_tilde(alpha) = -m1(0, alpha) >= 0.
// Composite Gauss-Legendre re-centred at mu, truncation radius from the slab
// quadrature spec, refined until relative tolerance 1e-8.
double m1_of(const ConvolvedDensity& g, double mu, double alpha);
double m2_of(const ConvolvedDensity& g, double mu, double alpha);
double m_tilde_of(const ConvolvedDensity& g, double alpha);

struct MomentDiagnostics {
  double alpha = 0.0;
  double m_tilde = 0.0;
  std::vector<double> mu;
  std::vector<double> m1;
  std::vector<double> m2;
};

MomentDiagnostics moments_of(const ConvolvedDensity& g, double alpha,
                             std::span<const double> mus);

// Diagnostic solve of d * alpha * m_tilde(alpha) = s / n for alpha (the
// noise-dominated fixed point of the score equation at sparsity s); d is the
// caller's slack constant.
double alpha_tilde_of(const ConvolvedDensity& g, long n, double s, double d);

}  // namespace ebseq
