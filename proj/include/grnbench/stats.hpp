#ifndef GRNBENCH_STATS_HPP
#define GRNBENCH_STATS_HPP

#include "grnbench/core_data.hpp"

#include <span>
#include <vector>

/**
 * @file stats.hpp
 * @brief Nonparametric two-sample statistics, multiple-testing correction and correlation helpers.
 *
 * All functions are pure. Samples must be non-empty and finite; violations throw `std::invalid_argument`.
 */

namespace grnbench::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/**
 * Exact first Wasserstein distance between two empirical distributions,
 * i.e. the integral of |F_a - F_b| over the merged sorted support. Sample sizes may differ.
 */
double wasserstein1(std::span<const double> a, std::span<const double> b);

enum class MwuMethod {
    /// Exact distribution when the pooled size is at most `kMwuExactMaxSize`, normal approximation otherwise.
    automatic,
    exact,
    asymptotic,
};

inline constexpr std::size_t kMwuExactMaxSize = 20;

/**
 * Two-sided Mann-Whitney U test.
 *
 * `statistic` is U for sample `a`: the number of (a, b) pairs with a > b, ties counting one half.
 * The asymptotic p-value uses the normal approximation with tie and continuity corrections.
 * The exact p-value is 2 * min(P(U <= u), P(U >= u)) under the permutation distribution of the
 * pooled midranks, so ties are handled exactly as well. p-values are clamped to [0, 1]; a zero
 * tie-corrected variance (every value identical) gives p = 1.
 *
 * @throws std::invalid_argument on empty samples, or exact mode on more than `kMwuExactMaxSize` values.
 */
TestResult mann_whitney_u_two_sided(std::span<const double> a, std::span<const double> b, MwuMethod method = MwuMethod::automatic);

/**
 * Two-sample Kolmogorov-Smirnov test.
 * D = sup |F_a - F_b|; the p-value is the asymptotic Kolmogorov tail at sqrt(n_e) * D with
 * n_e = |a||b| / (|a| + |b|).
 */
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Kolmogorov distribution survival function Q(x) = P(K > x), clamped to [0, 1].
double kolmogorov_survival(double x);

/**
 * Benjamini-Hochberg step-up adjusted p-values, in input order.
 * @throws std::invalid_argument for values outside [0, 1].
 */
std::vector<double> benjamini_hochberg(std::span<const double> p);

/**
 * Sample Pearson correlation. Returns 0 when either input has zero variance.
 * @throws std::invalid_argument on length mismatch or fewer than two values.
 */
double pearson(std::span<const double> x, std::span<const double> y);

/// Each row centred and divided by its population standard deviation; constant rows become zeros.
Matrix zscore_rows(const Matrix& values);

double mean(std::span<const double> x);

/// Median of a non-empty sample (average of the two middle values for even sizes).
double median(std::vector<double> x);

/// Standard normal upper tail 1 - Phi(z), accurate in the far tail.
double normal_survival(double z);

}  // namespace grnbench::stats

#endif
