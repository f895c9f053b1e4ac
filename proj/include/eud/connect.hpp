#pragma once

#include <string_view>
#include <vector>

#include "eud/graph.hpp"

namespace eud {

enum class Strategy { Naive, Greedy, Oracle };

std::string_view strategy_name(Strategy s);

// Result of repairing a fragmented graph: the repaired graph differs from the
// input only by the listed root edges, and is fully reachable from ROOT.
struct RepairOutcome {
    EnhancedGraph repaired;
    std::vector<Edge> added_edges;  // all (0, node, "root"), in addition order
    Strategy strategy;
};

// Attaches every unreachable node (computed once on the input) to ROOT.
RepairOutcome connect_naive(const EnhancedGraph& g);

// Repeatedly promotes the unreachable node from which the most unreachable
// nodes can be reached (counting itself; paths may pass through any node),
// first in surface order on ties, until the graph is connected.
RepairOutcome connect_greedy(const EnhancedGraph& g);

// Exhaustive minimum-cardinality repair: searches subsets of the unreachable
// set by increasing size, then lexicographic order. Refuses instances with
// more than max_nodes unreachable nodes.
RepairOutcome connect_oracle(const EnhancedGraph& g, int max_nodes = 16);

RepairOutcome connect_with(const EnhancedGraph& g, Strategy strategy);

}  // namespace eud
