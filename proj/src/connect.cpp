#include "eud/connect.hpp"

#include <algorithm>

namespace eud {

namespace {

const char* kRootLabel = "root";

Edge root_edge(int node) { return Edge{0, node, kRootLabel}; }

}  // namespace

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Naive: return "naive";
        case Strategy::Greedy: return "greedy";
        case Strategy::Oracle: return "oracle";
    }
    return "?";
}

RepairOutcome connect_naive(const EnhancedGraph& g) {
    RepairOutcome out{g, {}, Strategy::Naive};
    for (int u : reachability(g).unreachable) {
        out.repaired.add_edge(0, u, kRootLabel);
        out.added_edges.push_back(root_edge(u));
    }
    return out;
}

RepairOutcome connect_greedy(const EnhancedGraph& g) {
    RepairOutcome out{g, {}, Strategy::Greedy};
    while (true) {
        std::set<int> unreachable = reachability(out.repaired).unreachable;
        if (unreachable.empty()) break;
        int best_node = -1;
        std::size_t best_count = 0;
        for (int u : unreachable) {  // ascending = surface order
            std::set<int> reached = reachable_from(out.repaired, u);
            std::size_t count = 0;
            for (int v : reached)
                if (unreachable.count(v)) ++count;  // includes u itself
            if (count > best_count) {
                best_count = count;
                best_node = u;
            }
        }
        out.repaired.add_edge(0, best_node, kRootLabel);
        out.added_edges.push_back(root_edge(best_node));
    }
    return out;
}

RepairOutcome connect_oracle(const EnhancedGraph& g, int max_nodes) {
    std::set<int> unreachable_set = reachability(g).unreachable;
    std::vector<int> unreachable(unreachable_set.begin(), unreachable_set.end());
    if (static_cast<int>(unreachable.size()) > max_nodes)
        throw InputError("oracle connector limited to " + std::to_string(max_nodes) +
                         " unreachable nodes, got " + std::to_string(unreachable.size()));

    int n = static_cast<int>(unreachable.size());
    for (int size = 0; size <= n; ++size) {
        // Index combinations in lexicographic order.
        std::vector<int> pick(size);
        for (int i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            EnhancedGraph candidate = g;
            for (int i : pick) candidate.add_edge(0, unreachable[i], kRootLabel);
            if (reachability(candidate).unreachable.empty()) {
                RepairOutcome out{std::move(candidate), {}, Strategy::Oracle};
                for (int i : pick) out.added_edges.push_back(root_edge(unreachable[i]));
                return out;
            }
            int pos = size - 1;
            while (pos >= 0 && pick[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (int i = pos + 1; i < size; ++i) pick[i] = pick[i - 1] + 1;
        }
    }
    // Unreachable: promoting every unreachable node always connects the graph.
    throw std::logic_error("oracle connector found no repairing subset");
}

RepairOutcome connect_with(const EnhancedGraph& g, Strategy strategy) {
    switch (strategy) {
        case Strategy::Naive: return connect_naive(g);
        case Strategy::Greedy: return connect_greedy(g);
        case Strategy::Oracle: return connect_oracle(g);
    }
    throw std::logic_error("unknown strategy");
}

}  // namespace eud
