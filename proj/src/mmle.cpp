#include "ebseq/mmle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ebseq/errors.hpp"
#include "ebseq/normal.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/thresholds.hpp"

namespace ebseq {

namespace {

double stable_term(double L, double alpha) {
  // B/(1 + alpha B) written through exp(-L); see ConvolvedDensity.
  return -std::expm1(-L) / (alpha + (1.0 - alpha) * std::exp(-L));
}

double score_from_ratios(std::span<const double> Ls, double alpha) {
  return chunked_sum(Ls.size(),
                     [&](std::size_t i) { return stable_term(Ls[i], alpha); });
}

}  // namespace

double log_marginal(const ConvolvedDensity& g, std::span<const double> xs,
                    double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw config_error("alpha must lie in [0, 1]");
  return chunked_sum(xs.size(), [&](std::size_t i) {
    return normal_log_pdf(xs[i]) + g.log_one_plus_alpha_b(xs[i], alpha);
  });
}

double score(const ConvolvedDensity& g, std::span<const double> xs, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw config_error("alpha must lie in (0, 1]");
  return chunked_sum(xs.size(),
                     [&](std::size_t i) { return g.score_b_alpha(xs[i], alpha); });
}

MmleResult fit_alpha(const ConvolvedDensity& g, std::span<const double> xs,
                     double alpha_n) {
  const std::size_t n = xs.size();
  if (n < 2) throw config_error("fit_alpha needs at least 2 observations");
  if (!(alpha_n > 0.0 && alpha_n < 1.0))
    throw config_error("fit_alpha needs alpha_n in (0, 1)");

  // Reduce through sorted log-ratios: the summation order becomes a function
  // of the multiset of values only, so permuting xs cannot change any bit of
  // the result.
  std::vector<double> Ls(n);
  for (std::size_t i = 0; i < n; ++i) Ls[i] = g.log_ratio(xs[i]);
  std::sort(Ls.begin(), Ls.end());

  MmleResult out;
  out.alpha_n = alpha_n;

  const double s_lo = score_from_ratios(Ls, alpha_n);
  if (s_lo <= 0.0) {
    out.alpha_hat = alpha_n;
    out.at_lower_boundary = true;
    out.score_at_solution = s_lo;
    return out;
  }
  const double s_hi = score_from_ratios(Ls, 1.0);
  if (s_hi >= 0.0) {
    out.alpha_hat = 1.0;
    out.at_upper_boundary = true;
    out.score_at_solution = s_hi;
    return out;
  }

  double lo = alpha_n, hi = 1.0;
  double mid = 0.5 * (lo + hi);
  double s_mid = 0.0;
  const double score_tol = 1e-10 * static_cast<double>(n);
  while (hi - lo >= 1e-14) {
    mid = 0.5 * (lo + hi);
    s_mid = score_from_ratios(Ls, mid);
    ++out.iterations;
    if (std::abs(s_mid) < score_tol) break;
    (s_mid > 0.0 ? lo : hi) = mid;
  }
  out.alpha_hat = mid;
  out.score_at_solution = s_mid;
  return out;
}

MmleResult fit_alpha(const ConvolvedDensity& g, std::span<const double> xs) {
  return fit_alpha(g, xs, alpha_n_of(g, static_cast<long>(xs.size())));
}

}  // namespace ebseq
