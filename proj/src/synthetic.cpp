#include "confla/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "confla/random.hpp"

namespace confla {

double NKModel::evaluate(ConfigId bits) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t index = (bits >> i) & 1U;
        const auto& loci = interacting[i];
        for (std::size_t j = 0; j < loci.size(); ++j) index |= ((bits >> loci[j]) & 1U) << (j + 1);
        total += tables[i][index];
    }
    return total / static_cast<double>(n);
}

NKModel make_nk_model(const NKSpec& spec) {
    if (spec.n == 0) throw ValidationError("NK landscape needs n >= 1");
    if (spec.k >= spec.n) throw ValidationError("NK landscape needs 0 <= k <= n-1");
    if (spec.n > kMaxSyntheticBits) {
        throw ValidationError("NK landscape with n=" + std::to_string(spec.n) +
                              " is too large to materialize (n <= " + std::to_string(kMaxSyntheticBits) + ")");
    }
    Rng rng(spec.seed);
    NKModel model;
    model.n = spec.n;
    model.k = spec.k;
    model.interacting.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        auto& loci = model.interacting[i];
        if (spec.model == NKNeighborModel::adjacent) {
            for (std::size_t j = 1; j <= spec.k; ++j) loci.push_back((i + j) % spec.n);
        } else {
            // k distinct loci other than i, drawn by partial Fisher-Yates.
            std::vector<std::size_t> pool;
            for (std::size_t j = 0; j < spec.n; ++j) {
                if (j != i) pool.push_back(j);
            }
            for (std::size_t j = 0; j < spec.k; ++j) {
                const auto pick = j + static_cast<std::size_t>(rng.below(pool.size() - j));
                std::swap(pool[j], pool[pick]);
                loci.push_back(pool[j]);
            }
            std::sort(loci.begin(), loci.end());
        }
    }
    const std::size_t table_size = std::size_t{1} << (spec.k + 1);
    model.tables.resize(spec.n);
    for (auto& table : model.tables) {
        table.resize(table_size);
        for (auto& v : table) v = rng.uniform01();
    }
    return model;
}

Landscape generate_nk(const NKSpec& spec) {
    const NKModel model = make_nk_model(spec);
    return tabulate(ConfigSpace::binary(spec.n, Objective::maximize),
                    [&](ConfigId id) { return model.evaluate(id); });
}

std::vector<double> additive_weights(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> w;
    std::set<double> seen;
    while (w.size() < n) {
        const double v = 0.5 + rng.uniform01();
        if (seen.insert(v).second) w.push_back(v);
    }
    return w;
}

Landscape generate_additive(std::size_t n, const std::optional<std::vector<double>>& weights, std::uint64_t seed) {
    if (n == 0) throw ValidationError("additive landscape needs n >= 1");
    if (n > kMaxSyntheticBits) {
        throw ValidationError("additive landscape with n=" + std::to_string(n) + " is too large to materialize");
    }
    const std::vector<double> w = weights ? *weights : additive_weights(n, seed);
    if (w.size() != n) throw ValidationError("additive landscape needs exactly n weights");
    for (double v : w) {
        if (v == 0.0) throw ValidationError("additive weights must be non-zero (a zero weight creates neutrality)");
        if (!std::isfinite(v)) throw ValidationError("additive weights must be finite");
    }
    return tabulate(ConfigSpace::binary(n, Objective::maximize), [&](ConfigId id) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((id >> i) & 1U) f += w[i];
        }
        return f;
    });
}

}  // namespace confla
