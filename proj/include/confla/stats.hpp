#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace confla::stats {

/// Pairwise (tree) summation. The reduction order depends only on the input
/// length, so results do not change with scheduling.
double pairwise_sum(std::span<const double> x);

double mean(std::span<const double> x);
/// Population variance (divides by n).
double variance(std::span<const double> x);

/// Pearson correlation. Throws ValidationError on length mismatch, fewer
/// than two values, or zero variance in either input.
double pearson(std::span<const double> x, std::span<const double> y);

/// Values with 0-based ranks; tied values share the average of their ranks.
struct RankedVector {
    std::vector<double> values;
    std::vector<double> ranks;
};
RankedVector rank_average(std::span<const double> x);

/// Pearson correlation of average-ranked inputs.
double spearman(std::span<const double> x, std::span<const double> y);

/// Fisher's moment coefficient of skewness.
///
/// Population form g1 = m3 / m2^{3/2} by default; with sample_corrected the
/// adjusted G1 = g1 * sqrt(n(n-1)) / (n-2) is returned. Requires non-zero
/// variance and n >= 2 (n >= 3 for the corrected form).
double fisher_skewness(std::span<const double> x, bool sample_corrected = false);

struct KsResult {
    double statistic = 0.0;  // D
    double p_value = 1.0;    // asymptotic two-sided
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution evaluated at sqrt(n*m/(n+m)) * D.
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Linear-interpolated percentile (p in [0,100]) of an ascending sample.
double percentile_sorted(std::span<const double> sorted, double p);

/// Two-sided p-value of a one-sample t-test against mean zero.
/// Zero-variance samples yield p = 1 when the mean is zero and p = 0 otherwise.
double one_sample_t_test(std::span<const double> x);

inline constexpr std::array<double, 7> kReportedPercentiles{1, 5, 25, 50, 75, 95, 99};

/// Summary statistics of a sample. stdev is the population form; skewness is
/// absent when stdev is zero.
struct DistributionStats {
    std::size_t count = 0;
    double mean = 0.0;
    double stdev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::optional<double> skewness;
    std::array<double, kReportedPercentiles.size()> percentiles{};
};

DistributionStats describe(std::span<const double> x);

}  // namespace confla::stats
