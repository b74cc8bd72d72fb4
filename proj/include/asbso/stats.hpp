#pragma once

// Nonparametric comparison of optimizers: Wilcoxon signed-rank for pairs,
// Friedman ranking with control-vs-all post-hoc tests.

#include <cstddef>
#include <span>
#include <vector>

namespace asbso {

struct WilcoxonResult {
    double r_plus = 0.0;   ///< rank sum where the control (a) is better
    double r_minus = 0.0;  ///< rank sum where the opponent (b) is better
    double p_value = 1.0;  ///< two-sided
    std::size_t n_effective = 0;
    bool exact = false;
};

struct WilcoxonOptions {
    /// Largest n_effective that uses the exact null distribution.
    std::size_t exact_max_n = 50;
    std::size_t min_n = 5;
};

/// 1-based ranks with ties given the average of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Two-sided exact p: the fraction of the 2^n sign assignments over `ranks`
/// whose positive-rank sum lies at least as far from its mean as `r_plus`.
/// Ranks must be multiples of 1/2 (average ranks always are). n <= 62.
double wilcoxon_exact_p(std::span<const double> ranks, double r_plus);

/// Normal approximation with tie and continuity corrections.
double wilcoxon_normal_p(std::span<const double> ranks, double r_plus);

/// Signed-rank test on paired minimization results. Differences are b - a, so
/// a positive difference means the control `a` did better. Zero differences
/// are dropped. Throws InsufficientDataError below `min_n` usable pairs and
/// ContractViolation on a length mismatch.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    const WilcoxonOptions& options = {});

/// Multiplicity-adjusted p-values, each clipped to 1, in input order.
struct AdjustedPValues {
    std::vector<double> bonferroni;
    std::vector<double> holm;
    std::vector<double> hochberg;
};

AdjustedPValues adjust_p_values(std::span<const double> unadjusted);

struct FriedmanResult {
    std::vector<double> average_ranks;  ///< per algorithm; lower is better
    std::size_t control = 0;
    std::size_t problems = 0;
    double chi_square = 0.0;            ///< omnibus Friedman statistic
    double omnibus_p = 1.0;
    /// Per non-control algorithm, in algorithm order.
    std::vector<std::size_t> compared;
    std::vector<double> z;
    std::vector<double> unadjusted;
    AdjustedPValues adjusted;
};

/// `results[problem][algorithm]`, lower is better. Per-problem ranks use
/// average ranks on ties. Each non-control algorithm j is compared to the
/// control with z = (R_j - R_control) / sqrt(a (a + 1) / (6 n)) and a two-sided
/// normal p. Throws InsufficientDataError with fewer than 2 problems and
/// ContractViolation with fewer than 2 algorithms or ragged rows.
FriedmanResult friedman_with_posthoc(const std::vector<std::vector<double>>& results,
                                     std::size_t control);

/// Two-sided standard-normal tail probability 2 * (1 - Phi(|z|)).
double two_sided_normal_p(double z);

} // namespace asbso
