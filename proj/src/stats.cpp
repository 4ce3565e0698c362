#include "grnbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace grnbench::stats {

namespace {

void require_sample(std::span<const double> x, const char* what) {
    if (x.empty()) {
        throw std::invalid_argument(std::string(what) + ": empty sample");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value in sample");
        }
    }
}

std::vector<double> sorted_copy(std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    std::sort(out.begin(), out.end());
    return out;
}

double clamp_unit(double p) {
    if (std::isnan(p)) {
        return 1.0;
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Pooled midranks: ranks[k] for the k-th element of a followed by b.
struct PooledRanks {
    std::vector<double> ranks;
    std::vector<std::size_t> tie_sizes;
};

PooledRanks pooled_midranks(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size() + b.size();
    std::vector<double> pooled;
    pooled.reserve(n);
    pooled.insert(pooled.end(), a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return pooled[l] < pooled[r]; });

    PooledRanks out;
    out.ranks.assign(n, 0.0);
    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && pooled[order[stop]] == pooled[order[start]]) {
            ++stop;
        }
        const double midrank = 0.5 * static_cast<double>(start + 1 + stop);
        for (std::size_t k = start; k < stop; ++k) {
            out.ranks[order[k]] = midrank;
        }
        out.tie_sizes.push_back(stop - start);
        start = stop;
    }
    return out;
}

/**
 * Exact two-sided p for U under random assignment of n1 of the pooled values to `a`.
 * Dynamic programme over tie groups: choosing k of a group of size t contributes C(t, k)
 * assignments and k * midrank to the rank sum. Rank sums are tracked in half units.
 */
double mwu_exact_p(std::size_t n1, const std::vector<std::size_t>& tie_sizes, double observed_rank_sum) {
    const std::size_t n = std::accumulate(tie_sizes.begin(), tie_sizes.end(), std::size_t{0});
    const std::size_t max_half = n * (n + 1);  // twice the largest possible rank sum
    // ways[k][s]: number of assignments choosing k items with doubled rank sum s.
    std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_half + 1, 0.0));
    ways[0][0] = 1.0;

    std::size_t consumed = 0;
    for (std::size_t t : tie_sizes) {
        const std::size_t doubled_midrank = 2 * consumed + t + 1;
        std::vector<double> binom(t + 1, 1.0);
        for (std::size_t k = 1; k <= t; ++k) {
            binom[k] = binom[k - 1] * static_cast<double>(t - k + 1) / static_cast<double>(k);
        }
        auto next = std::vector<std::vector<double>>(n1 + 1, std::vector<double>(max_half + 1, 0.0));
        for (std::size_t k = 0; k <= n1; ++k) {
            for (std::size_t s = 0; s <= max_half; ++s) {
                const double w = ways[k][s];
                if (w == 0.0) {
                    continue;
                }
                for (std::size_t take = 0; take <= t && k + take <= n1; ++take) {
                    next[k + take][s + take * doubled_midrank] += w * binom[take];
                }
            }
        }
        ways = std::move(next);
        consumed += t;
    }

    const auto observed = static_cast<long long>(std::llround(2.0 * observed_rank_sum));
    double total = 0.0, lower = 0.0, upper = 0.0;
    for (std::size_t s = 0; s <= max_half; ++s) {
        const double w = ways[n1][s];
        total += w;
        if (static_cast<long long>(s) <= observed) {
            lower += w;
        }
        if (static_cast<long long>(s) >= observed) {
            upper += w;
        }
    }
    return clamp_unit(2.0 * std::min(lower, upper) / total);
}

}  // namespace

double mean(std::span<const double> x) {
    require_sample(x, "mean");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double median(std::vector<double> x) {
    require_sample(x, "median");
    const auto mid = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
    const double hi = x[mid];
    if (x.size() % 2 == 1) {
        return hi;
    }
    const double lo = *std::max_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

double normal_survival(double z) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
    require_sample(a, "wasserstein1");
    require_sample(b, "wasserstein1");
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    std::size_t ia = 0, ib = 0;
    double distance = 0.0;
    double previous = std::min(sa.front(), sb.front());
    while (ia < sa.size() || ib < sb.size()) {
        const double next = (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib])) ? sa[ia] : sb[ib];
        // CDFs are constant on [previous, next).
        const double fa = static_cast<double>(ia) / na;
        const double fb = static_cast<double>(ib) / nb;
        distance += std::abs(fa - fb) * (next - previous);
        while (ia < sa.size() && sa[ia] == next) {
            ++ia;
        }
        while (ib < sb.size() && sb[ib] == next) {
            ++ib;
        }
        previous = next;
    }
    return distance;
}

TestResult mann_whitney_u_two_sided(std::span<const double> a, std::span<const double> b, MwuMethod method) {
    require_sample(a, "mann_whitney_u_two_sided");
    require_sample(b, "mann_whitney_u_two_sided");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
    if (method == MwuMethod::automatic) {
        method = n <= kMwuExactMaxSize ? MwuMethod::exact : MwuMethod::asymptotic;
    }
    if (method == MwuMethod::exact && n > kMwuExactMaxSize) {
        throw std::invalid_argument("exact Mann-Whitney mode supports at most " + std::to_string(kMwuExactMaxSize) + " pooled values");
    }

    const auto ranked = pooled_midranks(a, b);
    const double rank_sum_a = std::accumulate(ranked.ranks.begin(), ranked.ranks.begin() + static_cast<std::ptrdiff_t>(n1), 0.0);
    const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2), dn = static_cast<double>(n);
    TestResult result;
    result.statistic = rank_sum_a - dn1 * (dn1 + 1.0) / 2.0;

    if (method == MwuMethod::exact) {
        result.p_value = mwu_exact_p(n1, ranked.tie_sizes, rank_sum_a);
        return result;
    }

    double tie_term = 0.0;
    for (auto t : ranked.tie_sizes) {
        const double dt = static_cast<double>(t);
        tie_term += dt * dt * dt - dt;
    }
    const double variance = dn1 * dn2 / 12.0 * ((dn + 1.0) - (n > 1 ? tie_term / (dn * (dn - 1.0)) : 0.0));
    if (!(variance > 0.0)) {
        result.p_value = 1.0;
        return result;
    }
    const double centre = dn1 * dn2 / 2.0;
    const double z = (std::abs(result.statistic - centre) - 0.5) / std::sqrt(variance);
    result.p_value = clamp_unit(2.0 * normal_survival(z));
    return result;
}

double kolmogorov_survival(double x) {
    if (!(x > 0.0)) {
        return 1.0;
    }
    constexpr double kTolerance = 1e-12;
    constexpr double pi = std::numbers::pi;
    if (x < 1.18) {
        // Jacobi theta form of the CDF converges quickly for small x.
        const double w = std::sqrt(2.0 * pi) / x;
        const double f = -pi * pi / (8.0 * x * x);
        double cdf = 0.0;
        for (int k = 1; k < 100; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(odd * odd * f);
            cdf += term;
            if (term < kTolerance) {
                break;
            }
        }
        return clamp_unit(1.0 - w * cdf);
    }
    double tail = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        tail += sign * term;
        sign = -sign;
        if (term < kTolerance) {
            break;
        }
    }
    return clamp_unit(2.0 * tail);
}

TestResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    require_sample(a, "ks_two_sample");
    require_sample(b, "ks_two_sample");
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());

    std::size_t ia = 0, ib = 0;
    double d = 0.0;
    while (ia < sa.size() && ib < sb.size()) {
        const double next = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] == next) {
            ++ia;
        }
        while (ib < sb.size() && sb[ib] == next) {
            ++ib;
        }
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    // Past the end of one sample the gap only shrinks, so the scan above is complete.
    TestResult result;
    result.statistic = d;
    const double effective = na * nb / (na + nb);
    result.p_value = kolmogorov_survival(std::sqrt(effective) * d);
    return result;
}

std::vector<double> benjamini_hochberg(std::span<const double> p) {
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("benjamini_hochberg: p-value outside [0, 1]");
        }
    }
    const std::size_t m = p.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return p[l] < p[r]; });

    std::vector<double> adjusted(m);
    double running = 1.0;
    for (std::size_t rank = m; rank >= 1; --rank) {
        const auto idx = order[rank - 1];
        running = std::min(running, p[idx] * static_cast<double>(m) / static_cast<double>(rank));
        // Rounding in p * m / rank can land one ulp under p itself.
        adjusted[idx] = std::max(p[idx], std::min(running, 1.0));
    }
    return adjusted;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("pearson: length mismatch");
    }
    if (x.size() < 2) {
        throw std::invalid_argument("pearson: need at least two values");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = x[k] - mx;
        const double dy = y[k] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Matrix zscore_rows(const Matrix& values) {
    Matrix out(values.rows(), values.cols());
    const double cols = static_cast<double>(values.cols());
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        const double mu = values.row(r).sum() / cols;
        const auto centred = (values.row(r).array() - mu).eval();
        const double sd = std::sqrt(centred.square().sum() / cols);
        if (sd == 0.0) {
            out.row(r).setZero();
        } else {
            out.row(r) = (centred / sd).matrix();
        }
    }
    return out;
}

}  // namespace grnbench::stats
