#include "eud/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace eud {

EnhancedGraph::EnhancedGraph(int n_words, int n_empty)
    : n_words_(n_words), n_empty_(n_empty) {
    if (n_words < 0 || n_empty < 0)
        throw std::invalid_argument("negative node count");
}

bool EnhancedGraph::add_edge(int head, int dep, std::string label) {
    if (head < 0 || head > max_index())
        throw std::invalid_argument("edge head out of range");
    if (dep < 1 || dep > max_index())
        throw std::invalid_argument("edge dependent out of range (ROOT may not be a dependent)");
    if (head == dep) throw std::invalid_argument("self-loop");
    return edges_.insert(Edge{head, dep, std::move(label)}).second;
}

bool EnhancedGraph::remove_edge(const Edge& e) { return edges_.erase(e) > 0; }

bool EnhancedGraph::contains(int head, int dep, std::string_view label) const {
    return edges_.count(Edge{head, dep, std::string(label)}) > 0;
}

std::vector<Edge> EnhancedGraph::edges_to(int dep) const {
    std::vector<Edge> out;
    for (const Edge& e : edges_)
        if (e.dep == dep) out.push_back(e);
    return out;
}

std::vector<Edge> EnhancedGraph::edges_from(int head) const {
    std::vector<Edge> out;
    for (const Edge& e : edges_)
        if (e.head == head) out.push_back(e);
    return out;
}

std::set<int> reachable_from(const EnhancedGraph& g, int start) {
    std::vector<std::vector<int>> adj(g.max_index() + 1);
    for (const Edge& e : g.edges()) adj[e.head].push_back(e.dep);
    std::set<int> seen{start};
    std::deque<int> queue{start};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[v])
            if (seen.insert(w).second) queue.push_back(w);
    }
    return seen;
}

ReachabilityReport reachability(const EnhancedGraph& g) {
    ReachabilityReport report;
    std::set<int> seen = reachable_from(g, 0);
    for (int v = 1; v <= g.max_index(); ++v) {
        if (seen.count(v))
            report.reachable.insert(v);
        else
            report.unreachable.insert(v);
    }
    for (const Edge& e : g.edges())
        if (e.head == 0) report.root_children.insert(e.dep);
    return report;
}

int node_index(const Sentence& s, const TokenId& head) {
    if (head.is_range())
        throw InputError("enhanced head references a multiword token range " + head.str());
    if (head.is_word()) {
        int n = s.word_count();
        if (head.index() > n)
            throw InputError("dangling head reference " + head.str() + " (" +
                             std::to_string(n) + " words)");
        return head.index();
    }
    int slot = s.word_count();
    for (const Token& t : s.tokens) {
        if (!t.id.is_empty()) continue;
        ++slot;
        if (t.id == head) return slot;
    }
    throw InputError("dangling head reference " + head.str() + " (no such empty node)");
}

TokenId node_token_id(const Sentence& s, int index) {
    if (index < 1) throw std::invalid_argument("node index must be positive");
    if (index <= s.word_count()) return TokenId::word(index);
    int slot = s.word_count();
    for (const Token& t : s.tokens) {
        if (!t.id.is_empty()) continue;
        ++slot;
        if (slot == index) return t.id;
    }
    throw std::invalid_argument("node index out of range");
}

EnhancedGraph from_sentence(const Sentence& s) {
    EnhancedGraph g(s.word_count(), s.empty_count());
    int empty_seen = 0;
    for (const Token& t : s.tokens) {
        if (t.id.is_range()) continue;
        int dep = t.id.is_word() ? t.id.index() : g.n_words() + ++empty_seen;
        for (const DepsEntry& entry : t.deps) {
            int head = node_index(s, entry.head);
            if (head == dep)
                throw InputError("token " + t.id.str() + " lists itself as enhanced head");
            g.add_edge(head, dep, entry.label);
        }
    }
    return g;
}

Sentence to_sentence(const EnhancedGraph& g, const Sentence& tmpl) {
    if (g.n_words() != tmpl.word_count() || g.n_empty() != tmpl.empty_count())
        throw InputError("graph and sentence node counts differ (" +
                         std::to_string(g.n_words()) + "+" + std::to_string(g.n_empty()) +
                         " vs " + std::to_string(tmpl.word_count()) + "+" +
                         std::to_string(tmpl.empty_count()) + ")");
    std::map<int, std::vector<DepsEntry>> by_dep;
    for (const Edge& e : g.edges()) {
        TokenId head = e.head == 0 ? TokenId::word(0) : node_token_id(tmpl, e.head);
        by_dep[e.dep].push_back(DepsEntry{head, e.label});
    }
    Sentence out = tmpl;
    int empty_seen = 0;
    for (Token& t : out.tokens) {
        if (t.id.is_range()) continue;
        int dep = t.id.is_word() ? t.id.index() : g.n_words() + ++empty_seen;
        auto it = by_dep.find(dep);
        t.deps = it == by_dep.end() ? std::vector<DepsEntry>{} : std::move(it->second);
        std::sort(t.deps.begin(), t.deps.end(), [](const DepsEntry& a, const DepsEntry& b) {
            auto ka = a.head.order_key();
            auto kb = b.head.order_key();
            if (ka != kb) return ka < kb;
            return a.label < b.label;
        });
    }
    return out;
}

}  // namespace eud
