#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "eud/conllu.hpp"

namespace eud {

// Dense node indexing shared by the graph and the decoder's matrices:
// 0 is the notional ROOT, 1..n_words are words, and empty nodes occupy
// n_words+1..n_words+n_empty in document order.

struct Edge {
    int head = 0;
    int dep = 0;
    std::string label;

    auto operator<=>(const Edge&) const = default;
};

// Labeled directed multigraph over one sentence. Parallel edges with distinct
// labels are allowed; duplicate triples collapse; ROOT never appears as a
// dependent and self-loops are rejected.
class EnhancedGraph {
public:
    EnhancedGraph() = default;
    explicit EnhancedGraph(int n_words, int n_empty = 0);

    int n_words() const { return n_words_; }
    int n_empty() const { return n_empty_; }
    int max_index() const { return n_words_ + n_empty_; }

    // Returns false when the exact triple was already present.
    bool add_edge(int head, int dep, std::string label);
    bool remove_edge(const Edge& e);
    bool contains(int head, int dep, std::string_view label) const;

    const std::set<Edge>& edges() const { return edges_; }
    std::vector<Edge> edges_to(int dep) const;
    std::vector<Edge> edges_from(int head) const;

    bool operator==(const EnhancedGraph&) const = default;

private:
    int n_words_ = 0;
    int n_empty_ = 0;
    std::set<Edge> edges_;
};

struct ReachabilityReport {
    std::set<int> reachable;
    std::set<int> unreachable;
    std::set<int> root_children;
};

// Full directed traversal from the notional ROOT (node 0), head to dependent.
ReachabilityReport reachability(const EnhancedGraph& g);

// Nodes reachable from `start` by directed paths, including `start` itself.
std::set<int> reachable_from(const EnhancedGraph& g, int start);

// DEPS-head to dense index for one sentence; throws InputError when the
// reference dangles. node_token_id is the inverse for indices >= 1.
int node_index(const Sentence& s, const TokenId& head);
TokenId node_token_id(const Sentence& s, int index);

EnhancedGraph from_sentence(const Sentence& s);

// Rewrites the DEPS columns of a copy of `tmpl` from g; every other column is
// untouched. Inverse of from_sentence. Throws InputError on count mismatch.
Sentence to_sentence(const EnhancedGraph& g, const Sentence& tmpl);

}  // namespace eud
