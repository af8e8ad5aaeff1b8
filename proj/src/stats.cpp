#include "confla/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "confla/error.hpp"

namespace confla::stats {

namespace {

bool is_constant(std::span<const double> x) {
    return std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end();
}

}  // namespace

double pairwise_sum(std::span<const double> x) {
    constexpr std::size_t kBlock = 64;
    if (x.size() <= kBlock) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

double mean(std::span<const double> x) {
    if (x.empty()) throw ValidationError("mean of an empty sample");
    return pairwise_sum(x) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    const double m = mean(x);
    std::vector<double> sq(x.size());
    std::transform(x.begin(), x.end(), sq.begin(), [m](double v) { return (v - m) * (v - m); });
    return pairwise_sum(sq) / static_cast<double>(x.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    if (x.size() < 2) throw ValidationError("correlation needs at least two values");
    if (is_constant(x) || is_constant(y)) throw ValidationError("correlation undefined for a constant input");
    const double mx = mean(x);
    const double my = mean(y);
    std::vector<double> sxy(x.size()), sxx(x.size()), syy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy[i] = dx * dy;
        sxx[i] = dx * dx;
        syy[i] = dy * dy;
    }
    const double vx = pairwise_sum(sxx);
    const double vy = pairwise_sum(syy);
    if (vx == 0.0 || vy == 0.0) throw ValidationError("correlation undefined for a constant input");
    const double r = pairwise_sum(sxy) / std::sqrt(vx * vy);
    return std::clamp(r, -1.0, 1.0);
}

RankedVector rank_average(std::span<const double> x) {
    RankedVector out;
    out.values.assign(x.begin(), x.end());
    out.ranks.assign(x.size(), 0.0);
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0;
        for (std::size_t k = i; k < j; ++k) out.ranks[order[k]] = avg;
        i = j;
    }
    return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    const auto rx = rank_average(x);
    const auto ry = rank_average(y);
    return pearson(rx.ranks, ry.ranks);
}

double fisher_skewness(std::span<const double> x, bool sample_corrected) {
    if (x.size() < 2) throw ValidationError("skewness needs at least two values");
    if (sample_corrected && x.size() < 3) throw ValidationError("sample-corrected skewness needs at least three values");
    if (is_constant(x)) throw ValidationError("skewness undefined for zero variance");
    const double m = mean(x);
    std::vector<double> d2(x.size()), d3(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - m;
        d2[i] = d * d;
        d3[i] = d * d * d;
    }
    const double n = static_cast<double>(x.size());
    const double m2 = pairwise_sum(d2) / n;
    const double m3 = pairwise_sum(d3) / n;
    if (m2 == 0.0) throw ValidationError("skewness undefined for zero variance");
    const double g1 = m3 / std::pow(m2, 1.5);
    if (!sample_corrected) return g1;
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Small-lambda series for the CDF.
        const double pi = 3.14159265358979323846;
        const double w = std::sqrt(2.0 * pi) / lambda;
        const double a = -pi * pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int k = 1; k < 100; k += 2) {
            const double term = std::exp(a * k * k);
            cdf += term;
            if (term < 1e-17) break;
        }
        return std::clamp(1.0 - w * cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw ValidationError("KS test needs two non-empty samples");
    std::vector<double> a(x.begin(), x.end());
    std::vector<double> b(y.begin(), y.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    KsResult out;
    out.statistic = d;
    const double ne = na * nb / (na + nb);
    out.p_value = kolmogorov_survival(std::sqrt(ne) * d);
    return out;
}

double percentile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw ValidationError("percentile of an empty sample");
    const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double one_sample_t_test(std::span<const double> x) {
    if (x.size() < 2) throw ValidationError("t-test needs at least two values");
    const double n = static_cast<double>(x.size());
    if (is_constant(x)) return x.front() == 0.0 ? 1.0 : 0.0;
    const double m = mean(x);
    const double var = variance(x) * n / (n - 1.0);
    if (var == 0.0) return m == 0.0 ? 1.0 : 0.0;
    const double t = m / std::sqrt(var / n);
    const boost::math::students_t dist(n - 1.0);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

DistributionStats describe(std::span<const double> x) {
    if (x.empty()) throw ValidationError("cannot describe an empty sample");
    DistributionStats s;
    s.count = x.size();
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    if (s.min == s.max) {
        // Constant sample: report exact values instead of rounding residue.
        s.mean = s.min;
        s.stdev = 0.0;
    } else {
        s.mean = mean(x);
        s.stdev = std::sqrt(variance(x));
    }
    if (s.stdev > 0.0) s.skewness = fisher_skewness(x);
    for (std::size_t i = 0; i < kReportedPercentiles.size(); ++i) {
        s.percentiles[i] = percentile_sorted(sorted, kReportedPercentiles[i]);
    }
    return s;
}

}  // namespace confla::stats
