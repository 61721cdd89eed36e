#pragma once

#include <span>

#include "ebseq/convolved.hpp"

namespace ebseq {

// Marginal log-likelihood of the mixing weight:
//   ell(alpha) = sum_i log phi(x_i) + sum_i log(1 + alpha B(x_i)).
double log_marginal(const ConvolvedDensity& g, std::span<const double> xs,
                    double alpha);

// S(alpha) = d/d alpha ell(alpha) = sum_i B(x_i, alpha); strictly decreasing.
double score(const ConvolvedDensity& g, std::span<const double> xs, double alpha);

struct MmleResult {
  double alpha_hat = 0.0;
  bool at_lower_boundary = false;  // alpha_hat == alpha_n, S(alpha_n) <= 0
  bool at_upper_boundary = false;  // alpha_hat == 1, S(1) >= 0
  double score_at_solution = 0.0;
  double alpha_n = 0.0;
  int iterations = 0;
};

// Maximiser of ell over [alpha_n, 1].  The score is strictly decreasing, so
// the argmax is a boundary or the unique root of S, found by bisection until
// |S(alpha)|/n < 1e-10 or the bracket is shorter than 1e-14.  Observations are
// reduced through their sorted log-ratio values, so the result is exactly
// invariant under permutation of xs.
MmleResult fit_alpha(const ConvolvedDensity& g, std::span<const double> xs,
                     double alpha_n);

// Same, computing alpha_n from n = xs.size() first.
MmleResult fit_alpha(const ConvolvedDensity& g, std::span<const double> xs);

}  // namespace ebseq
