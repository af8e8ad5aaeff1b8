#include "confla/emd.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "confla/error.hpp"

namespace confla {

namespace {

/// Primal-dual min-cost flow: Dijkstra with potentials finds the shortest
/// augmenting distance, then a Dinic blocking flow saturates every
/// zero-reduced-cost path at that distance.
class MinCostFlow {
public:
    explicit MinCostFlow(std::size_t nodes) : head_(nodes, kNone) {}

    void add_edge(std::size_t from, std::size_t to, std::int64_t cap, std::int64_t cost) {
        edges_.push_back({to, head_[from], cap, cost});
        head_[from] = edges_.size() - 1;
        edges_.push_back({from, head_[to], 0, -cost});
        head_[to] = edges_.size() - 1;
    }

    std::pair<std::int64_t, std::int64_t> run(std::size_t s, std::size_t t) {
        const std::size_t n = head_.size();
        potential_.assign(n, 0);
        std::int64_t flow = 0, cost = 0;
        while (true) {
            if (!dijkstra(s, t)) break;
            for (std::size_t v = 0; v < n; ++v) {
                if (dist_[v] < kInf) potential_[v] += dist_[v];
            }
            const std::int64_t path_cost = potential_[t] - potential_[s];
            const std::int64_t pushed = blocking_flow(s, t);
            if (pushed == 0) break;
            flow += pushed;
            cost += pushed * path_cost;
        }
        return {flow, cost};
    }

private:
    struct Edge {
        std::size_t to;
        std::size_t next;
        std::int64_t cap;
        std::int64_t cost;
    };
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

    std::int64_t reduced(std::size_t from, const Edge& e) const { return e.cost + potential_[from] - potential_[e.to]; }

    bool dijkstra(std::size_t s, std::size_t t) {
        dist_.assign(head_.size(), kInf);
        using Item = std::pair<std::int64_t, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist_[s] = 0;
        pq.push({0, s});
        while (!pq.empty()) {
            const auto [d, v] = pq.top();
            pq.pop();
            if (d != dist_[v]) continue;
            for (std::size_t i = head_[v]; i != kNone; i = edges_[i].next) {
                const auto& e = edges_[i];
                if (e.cap <= 0) continue;
                const std::int64_t nd = d + reduced(v, e);
                if (nd < dist_[e.to]) {
                    dist_[e.to] = nd;
                    pq.push({nd, e.to});
                }
            }
        }
        return dist_[t] < kInf;
    }

    bool admissible(std::size_t from, const Edge& e) const { return e.cap > 0 && reduced(from, e) == 0; }

    std::int64_t blocking_flow(std::size_t s, std::size_t t) {
        std::int64_t total = 0;
        while (true) {
            level_.assign(head_.size(), -1);
            std::queue<std::size_t> q;
            level_[s] = 0;
            q.push(s);
            while (!q.empty()) {
                const auto v = q.front();
                q.pop();
                for (std::size_t i = head_[v]; i != kNone; i = edges_[i].next) {
                    const auto& e = edges_[i];
                    if (level_[e.to] < 0 && admissible(v, e)) {
                        level_[e.to] = level_[v] + 1;
                        q.push(e.to);
                    }
                }
            }
            if (level_[t] < 0) return total;
            iter_ = head_;
            while (const std::int64_t f = augment(s, t, kInf)) total += f;
        }
    }

    std::int64_t augment(std::size_t v, std::size_t t, std::int64_t limit) {
        if (v == t) return limit;
        for (std::size_t& i = iter_[v]; i != kNone; i = edges_[i].next) {
            auto& e = edges_[i];
            if (!admissible(v, e) || level_[e.to] != level_[v] + 1) continue;
            const std::int64_t f = augment(e.to, t, std::min(limit, e.cap));
            if (f > 0) {
                e.cap -= f;
                edges_[i ^ 1].cap += f;
                return f;
            }
        }
        return 0;
    }

    std::vector<std::size_t> head_;
    std::vector<Edge> edges_;
    std::vector<std::int64_t> potential_;
    std::vector<std::int64_t> dist_;
    std::vector<int> level_;
    std::vector<std::size_t> iter_;
};

}  // namespace

std::int64_t transport_cost(std::span<const std::int64_t> supplies, std::span<const std::int64_t> demands,
                            std::span<const std::int64_t> cost) {
    const std::size_t m = supplies.size(), k = demands.size();
    if (m == 0 || k == 0) throw ValidationError("transportation problem needs non-empty supplies and demands");
    if (cost.size() != m * k) throw ValidationError("transportation cost matrix has the wrong size");
    std::int64_t total_s = 0, total_d = 0;
    for (const auto s : supplies) {
        if (s < 0) throw ValidationError("negative supply");
        total_s += s;
    }
    for (const auto d : demands) {
        if (d < 0) throw ValidationError("negative demand");
        total_d += d;
    }
    if (total_s != total_d) throw ValidationError("supplies and demands must balance");
    for (const auto c : cost) {
        if (c < 0) throw ValidationError("negative transport cost");
    }

    const std::size_t source = m + k, sink = m + k + 1;
    MinCostFlow g(m + k + 2);
    for (std::size_t i = 0; i < m; ++i) g.add_edge(source, i, supplies[i], 0);
    for (std::size_t j = 0; j < k; ++j) g.add_edge(m + j, sink, demands[j], 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) g.add_edge(i, m + j, total_s, cost[i * k + j]);
    }
    const auto [flow, total] = g.run(source, sink);
    if (flow != total_s) throw Error("transportation solver did not saturate the supplies");
    return total;
}

double emd_uniform(const ConfigSpace& space, std::span<const ConfigId> a, std::span<const ConfigId> b) {
    if (a.empty() || b.empty()) throw ValidationError("EMD needs two non-empty point sets");
    const std::size_t m = a.size(), k = b.size();
    // Each point of a supplies k units and each point of b demands m units.
    std::vector<std::int64_t> supplies(m, static_cast<std::int64_t>(k));
    std::vector<std::int64_t> demands(k, static_cast<std::int64_t>(m));
    std::vector<std::int64_t> cost(m * k);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) cost[i * k + j] = static_cast<std::int64_t>(space.distance(a[i], b[j]));
    }
    const auto total = transport_cost(supplies, demands, cost);
    return static_cast<double>(total) / (static_cast<double>(m) * static_cast<double>(k));
}

}  // namespace confla
