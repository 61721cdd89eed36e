#include "ebseq/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebseq/errors.hpp"
#include "ebseq/reduce.hpp"
#include "ebseq/rng.hpp"

namespace ebseq {

void EbConstants::validate() const {
  if (!(q > 0.0 && q <= 2.0)) throw config_error("q must lie in (0, 2]");
  if (!(A > 1.0)) throw config_error("threshold constant A must exceed 1");
  if (!(C_q > 0.0)) throw config_error("count constant C_q must be positive");
  if (!(D_q > 0.0)) throw config_error("energy constant D_q must be positive");
}

namespace {

long eb_floor_value(long n, EbFloor rule) {
  if (rule == EbFloor::one) return 1;
  const double l2 = std::log2(static_cast<double>(n));
  return std::max<long>(1, static_cast<long>(std::ceil(l2 * l2)));
}

}  // namespace

EbReport check_eb(std::span<const double> theta, long s, const EbConstants& c,
                  EbFloor floor_rule) {
  c.validate();
  const long n = static_cast<long>(theta.size());
  if (n < 2) throw config_error("check_eb needs n >= 2");
  if (s < 1 || s > n) throw config_error("check_eb needs 1 <= s <= n");

  EbReport report;
  report.ell_floor = eb_floor_value(n, floor_rule);
  report.scanned_max = s;

  std::vector<double> mags(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) mags[i] = std::abs(theta[i]);
  std::sort(mags.begin(), mags.end());
  report.nonzero_count =
      n - static_cast<long>(std::count(mags.begin(), mags.end(), 0.0));
  if (report.nonzero_count > s)
    throw config_error("check_eb: theta has more than s non-zero coordinates");

  // prefix_q[k] = sum of the k smallest |theta_i|^q
  std::vector<double> prefix_q(mags.size() + 1, 0.0);
  {
    KahanSum acc;
    for (std::size_t k = 0; k < mags.size(); ++k) {
      acc.add(std::pow(mags[k], c.q));
      prefix_q[k + 1] = acc.value();
    }
  }

  for (long ell = report.ell_floor; ell <= s; ++ell) {
    const double log_term = std::log(static_cast<double>(n) / ell);
    const double threshold = c.A * std::sqrt(2.0 * log_term);
    // ">=" counts as a large signal, so small strictly below the threshold.
    const auto split = std::lower_bound(mags.begin(), mags.end(), threshold);
    const long below = static_cast<long>(split - mags.begin());
    const long large = n - below;
    const double small_energy = prefix_q[static_cast<std::size_t>(below)];
    const double budget =
        c.D_q * static_cast<double>(ell) * std::pow(log_term, 0.5 * c.q);
    const bool count_ok =
        static_cast<double>(large) * c.C_q >= static_cast<double>(ell);
    const bool energy_ok = small_energy <= budget;
    if (count_ok && energy_ok) {
      report.satisfied = true;
      report.smallest_ell = ell;
      report.effective_sparsity = large;
      report.threshold = threshold;
      report.large_count = large;
      report.small_energy = small_energy;
      report.small_energy_budget = budget;
      return report;
    }
    if (ell == s) {
      report.threshold = threshold;
      report.large_count = large;
      report.small_energy = small_energy;
      report.small_energy_budget = budget;
    }
  }
  return report;
}

bool check_testing_condition(std::span<const double> theta, long s1, long s2,
                             double c) {
  const long n = static_cast<long>(theta.size());
  if (!(s1 >= 1 && s1 < s2 && s2 <= n))
    throw config_error("testing condition needs 1 <= s1 < s2 <= n");
  if (!(c > 0.0)) throw config_error("testing condition constant must be positive");
  std::vector<double> sq(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) sq[i] = theta[i] * theta[i];
  std::sort(sq.begin(), sq.end(), std::greater<>());
  long nonzero = 0;
  for (double v : sq)
    if (v != 0.0) ++nonzero;
  if (nonzero > s2) return false;
  // squared distance to the best s1-sparse approximation: everything past the
  // s1 largest magnitudes
  KahanSum tail;
  for (std::size_t k = static_cast<std::size_t>(s1); k < sq.size(); ++k)
    tail.add(sq[k]);
  const double dn = static_cast<double>(n);
  const double sep =
      c * std::min(std::sqrt(dn), static_cast<double>(s2) * std::log(dn));
  return tail.value() >= sep;
}

bool check_testing_condition_dyadic(std::span<const double> theta, long s,
                                    double c) {
  if (s < 4) return false;  // needs at least the (2, 4) slice
  const long imax = static_cast<long>(std::floor(std::log2(static_cast<double>(s)))) - 1;
  for (long i = 1; i <= imax; ++i) {
    const long s1 = 1L << i;
    const long s2 = 1L << (i + 1);
    if (s2 > static_cast<long>(theta.size())) break;
    if (check_testing_condition(theta, s1, s2, c)) return true;
  }
  return false;
}

const char* signal_kind_name(SignalKind kind) {
  switch (kind) {
    case SignalKind::zero: return "zero";
    case SignalKind::flat: return "flat";
    case SignalKind::adversarial: return "adversarial";
    case SignalKind::eb_tail: return "eb_tail";
    case SignalKind::two_level: return "two_level";
  }
  return "?";
}

SignalKind parse_signal_kind(const std::string& name) {
  if (name == "zero") return SignalKind::zero;
  if (name == "flat") return SignalKind::flat;
  if (name == "adversarial") return SignalKind::adversarial;
  if (name == "eb_tail") return SignalKind::eb_tail;
  if (name == "two_level") return SignalKind::two_level;
  throw config_error("unknown signal kind: " + name);
}

namespace {

// First `count` positions of a keyed Fisher-Yates shuffle of 0..n-1.
std::vector<std::size_t> draw_support(long n, long count, std::uint64_t seed) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (long k = 0; k < count; ++k) {
    const std::uint64_t bits =
        rng_key(seed, 0, static_cast<std::uint64_t>(k),
                static_cast<std::uint64_t>(RngStream::signal_support));
    const std::size_t pick =
        static_cast<std::size_t>(k) +
        static_cast<std::size_t>(bits % static_cast<std::uint64_t>(n - k));
    std::swap(idx[static_cast<std::size_t>(k)], idx[pick]);
  }
  idx.resize(static_cast<std::size_t>(count));
  return idx;
}

double signal_sign(std::uint64_t seed, std::size_t k) {
  return (rng_key(seed, 0, k, static_cast<std::uint64_t>(RngStream::signal_sign)) & 1)
             ? 1.0
             : -1.0;
}

}  // namespace

std::vector<double> generate_signal(const SignalSpec& spec, long n, long s,
                                    std::uint64_t seed) {
  if (n < 2) throw config_error("generate_signal needs n >= 2");
  if (s < 0 || s > n) throw config_error("generate_signal needs 0 <= s <= n");
  std::vector<double> theta(static_cast<std::size_t>(n), 0.0);
  if (spec.kind == SignalKind::zero) return theta;
  if (spec.kind != SignalKind::two_level && s == 0) return theta;

  switch (spec.kind) {
    case SignalKind::zero:
      break;
    case SignalKind::flat: {
      const double amp = spec.amplitude_multiplier *
                         std::sqrt(2.0 * std::log(static_cast<double>(n) / s));
      const auto support = draw_support(n, s, seed);
      for (std::size_t k = 0; k < support.size(); ++k)
        theta[support[k]] = signal_sign(seed, k) * amp;
      break;
    }
    case SignalKind::adversarial: {
      if (!(spec.threshold_t > 0.0))
        throw config_error("adversarial signal needs threshold_t > 0");
      const auto support = draw_support(n, s, seed);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double u = uniform_at(seed, 0, k, RngStream::signal_value);
        const double mag = spec.threshold_t * (0.125 + u * 0.125);  // [t/8, t/4]
        theta[support[k]] = signal_sign(seed, k) * mag;
      }
      break;
    }
    case SignalKind::eb_tail: {
      // strong quarter + sub-threshold crumbs filling most of the energy budget
      const long strong = std::max<long>(1, s / 4);
      const double log_term = std::log(static_cast<double>(n) / strong);
      const double threshold = spec.A * std::sqrt(2.0 * log_term);
      const long weak = s - strong;
      double crumb = 0.0;
      if (weak > 0) {
        const double budget = 0.9 * spec.D_q * static_cast<double>(strong) *
                              std::pow(log_term, 0.5 * spec.q);
        crumb = std::pow(budget / static_cast<double>(weak), 1.0 / spec.q);
        crumb = std::min(crumb, 0.99 * threshold);
      }
      const auto support = draw_support(n, s, seed);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double mag =
            k < static_cast<std::size_t>(strong) ? 2.0 * threshold : crumb;
        theta[support[k]] = signal_sign(seed, k) * mag;
      }
      break;
    }
    case SignalKind::two_level: {
      if (!(spec.s1 >= 1 && spec.s1 < spec.s2 && spec.s2 <= n))
        throw config_error("two_level signal needs 1 <= s1 < s2 <= n");
      const double high =
          spec.A * std::sqrt(2.0 * std::log(static_cast<double>(n) / spec.s1));
      const double low =
          spec.c * std::sqrt(2.0 * std::log(static_cast<double>(n) / spec.s2));
      const auto support = draw_support(n, spec.s2, seed);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double mag = k < static_cast<std::size_t>(spec.s1) ? high : low;
        theta[support[k]] = signal_sign(seed, k) * mag;
      }
      break;
    }
  }
  return theta;
}

}  // namespace ebseq
