#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eud/conllu.hpp"
#include "eud/graph.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Basic-tree sentence: word i has form/lemma "w<i>", the given head and deprel,
// and empty DEPS.
inline eud::Sentence basic_sentence(const std::vector<int>& heads,
                                    const std::vector<std::string>& deprels) {
    eud::Sentence s;
    for (std::size_t i = 0; i < heads.size(); ++i) {
        eud::Token t;
        t.id = eud::TokenId::word(static_cast<int>(i) + 1);
        t.form = "w" + std::to_string(i + 1);
        t.lemma = t.form;
        t.upos = "X";
        t.xpos = "X";
        t.head = heads[i];
        t.deprel = deprels.size() > i ? deprels[i] : "dep";
        s.tokens.push_back(std::move(t));
    }
    return s;
}

inline eud::EnhancedGraph graph_of(int n_words,
                                   const std::vector<eud::Edge>& edges,
                                   int n_empty = 0) {
    eud::EnhancedGraph g(n_words, n_empty);
    for (const eud::Edge& e : edges) g.add_edge(e.head, e.dep, e.label);
    return g;
}

// Random labeled graph over 1..n words with no empty nodes; each ordered
// (head, dep) pair is drawn independently with probability `density`.
inline eud::EnhancedGraph random_graph(std::mt19937& rng, int max_words, double density) {
    std::uniform_int_distribution<int> words(1, max_words);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int n = words(rng);
    eud::EnhancedGraph g(n);
    for (int head = 0; head <= n; ++head)
        for (int dep = 1; dep <= n; ++dep) {
            if (head == dep) continue;
            if (coin(rng) < density) g.add_edge(head, dep, "dep");
        }
    return g;
}

// Random valid single-root basic tree over n words: word `root` attaches to 0,
// every other word attaches to an already-attached word.
inline eud::Sentence random_tree_sentence(std::mt19937& rng, int n,
                                          const std::vector<std::string>& label_pool = {
                                              "nsubj", "obj", "advmod", "det"}) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> heads(n, 0);
    std::vector<std::string> deprels(n);
    deprels[order[0] - 1] = "root";
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        heads[order[i] - 1] = order[pick(rng)];
        deprels[order[i] - 1] =
            label_pool[std::uniform_int_distribution<std::size_t>(0, label_pool.size() - 1)(rng)];
    }
    return basic_sentence(heads, deprels);
}

}  // namespace testutil
