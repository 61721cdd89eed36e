#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ebseq {

// Excessive-bias condition at level ell (candidate effective sparsity):
//   small-signal energy  sum_{|theta_i| <  A sqrt(2 log(n/ell))} |theta_i|^q
//                          <= D_q * ell * log^{q/2}(n/ell)
//   large-signal count   #{ i : |theta_i| >= A sqrt(2 log(n/ell)) } >= ell / C_q
// scanned over ell = floor .. s; the effective sparsity is the large-signal
// count at the smallest admissible ell.  Ties: ">=" counts as large.

struct EbConstants {
  double q = 2.0;
  double A = std::sqrt(2.0);  // strictly > 1; sqrt(2) admits the dyadic testing
                              // classes at separation constant c = 4
  double C_q = 2.0;           // > 0
  double D_q = 1.0;           // > 0
  void validate() const;  // throws config_error
};

// Scan floor: the conservative default starts at ceil(log2(n)^2); the relaxed
// rule starts at 1, which is what comparisons against small dyadic sparsity
// levels need.
enum class EbFloor { log2_squared, one };

struct EbReport {
  bool satisfied = false;
  long smallest_ell = 0;             // smallest admissible ell; 0 if none
  long effective_sparsity = 0;       // large-signal count at smallest_ell; 0 if none
  long ell_floor = 0;
  long scanned_max = 0;              // s
  long nonzero_count = 0;
  // diagnostics at smallest_ell (or at s when unsatisfied):
  double threshold = 0.0;            // A sqrt(2 log(n/ell))
  long large_count = 0;
  double small_energy = 0.0;
  double small_energy_budget = 0.0;  // D_q ell log^{q/2}(n/ell)
};

EbReport check_eb(std::span<const double> theta, long s, const EbConstants& c,
                  EbFloor floor_rule = EbFloor::log2_squared);

// Quadratic testing-type separation between sparsity levels s1 < s2:
// theta has at most s2 non-zeros and its squared distance to the best
// s1-sparse approximation is at least c * min(sqrt(n), s2 log n).
bool check_testing_condition(std::span<const double> theta, long s1, long s2,
                             double c);

// Union over dyadic slices s_i = 2^i, i = 1 .. floor(log2 s) - 1.
bool check_testing_condition_dyadic(std::span<const double> theta, long s,
                                    double c);

enum class SignalKind {
  zero,         // theta = 0
  flat,         // +/- multiplier * sqrt(2 log(n/s)) on a random s-support
  adversarial,  // magnitudes uniform in [t/8, t/4]; sits under the selection
                // threshold so the posterior spikes to zero yet inflates alpha-hat
  eb_tail,      // few strong spikes plus many sub-threshold crumbs: excessive-
                // bias-friendly but far from exactly sparse
  two_level,    // s1 coords at A sqrt(2 log(n/s1)), s2-s1 at c sqrt(2 log(n/s2));
                // separates the excessive-bias scan from dyadic testing slices
};

const char* signal_kind_name(SignalKind kind);
SignalKind parse_signal_kind(const std::string& name);

struct SignalSpec {
  SignalKind kind = SignalKind::flat;
  double amplitude_multiplier = 4.0;  // flat
  double threshold_t = 0.0;           // adversarial: the t(alpha) to hide under
  double A = 1.0;                     // eb_tail / two_level threshold constant
  double q = 2.0;                     // eb_tail energy exponent
  double D_q = 1.0;                   // eb_tail small-energy budget fraction target
  long s1 = 0, s2 = 0;                // two_level
  double c = 2.0;                     // two_level low-level amplitude constant
};

// Deterministic in (spec, n, s, seed); support and signs are drawn from the
// keyed generator, magnitudes per kind above.
std::vector<double> generate_signal(const SignalSpec& spec, long n, long s,
                                    std::uint64_t seed);

}  // namespace ebseq
