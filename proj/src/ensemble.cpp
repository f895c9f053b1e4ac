#include "eud/ensemble.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "eud/graph.hpp"

namespace eud {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Chu-Liu/Edmonds by recursive cycle contraction. Nodes 0..n with 0 as the
// root; w[d][h] scores arc h->d. Deterministic: argmax scans ascending and
// keeps the first maximum.
std::optional<std::vector<int>> cle_solve(int n, const std::vector<std::vector<double>>& w) {
    std::vector<int> best(n + 1, -1);
    for (int d = 1; d <= n; ++d) {
        double bw = kNegInf;
        for (int h = 0; h <= n; ++h) {
            if (h == d) continue;
            if (w[d][h] > bw) {
                bw = w[d][h];
                best[d] = h;
            }
        }
        if (best[d] < 0) return std::nullopt;
    }

    // Find one cycle in the best-incoming function, if any.
    std::vector<int> state(n + 1, 0);  // 0 unvisited, 1 on path, 2 done
    std::vector<int> cycle;
    for (int s = 1; s <= n && cycle.empty(); ++s) {
        if (state[s]) continue;
        std::vector<int> path;
        int v = s;
        while (v != 0 && state[v] == 0) {
            state[v] = 1;
            path.push_back(v);
            v = best[v];
        }
        if (v != 0 && state[v] == 1) {
            auto it = std::find(path.begin(), path.end(), v);
            cycle.assign(it, path.end());
        }
        for (int u : path) state[u] = 2;
    }
    if (cycle.empty()) return best;

    std::vector<char> in_cycle(n + 1, 0);
    for (int v : cycle) in_cycle[v] = 1;

    // Contract: outside nodes keep their relative order, the cycle becomes
    // the extra node c.
    std::vector<int> old_of{0};
    std::vector<int> new_of(n + 1, -1);
    new_of[0] = 0;
    for (int v = 1; v <= n; ++v)
        if (!in_cycle[v]) {
            new_of[v] = static_cast<int>(old_of.size());
            old_of.push_back(v);
        }
    int c = static_cast<int>(old_of.size());

    std::vector<std::vector<double>> w2(c + 1, std::vector<double>(c + 1, kNegInf));
    for (int d = 1; d <= n; ++d) {
        if (in_cycle[d]) continue;
        for (int h = 0; h <= n; ++h) {
            if (h == d || in_cycle[h]) continue;
            w2[new_of[d]][new_of[h]] = w[d][h];
        }
    }
    // Arcs entering the cycle: the head pays the swap cost against the
    // cycle-internal arc it replaces.
    std::vector<int> entry_node(c + 1, -1);
    for (int h = 0; h <= n; ++h) {
        if (in_cycle[h]) continue;
        double bw = kNegInf;
        int bv = -1;
        for (int v : cycle) {
            if (w[v][h] == kNegInf) continue;
            double adjusted = w[v][h] - w[v][best[v]];
            if (adjusted > bw) {
                bw = adjusted;
                bv = v;
            }
        }
        if (bv >= 0) {
            w2[c][new_of[h]] = bw;
            entry_node[new_of[h]] = bv;
        }
    }
    // Arcs leaving the cycle keep their best internal endpoint.
    std::vector<int> exit_head(c + 1, -1);
    for (int d = 1; d <= n; ++d) {
        if (in_cycle[d]) continue;
        double bw = kNegInf;
        int bh = -1;
        for (int v : cycle) {
            if (w[d][v] > bw) {
                bw = w[d][v];
                bh = v;
            }
        }
        if (bh >= 0 && bw > kNegInf) {
            w2[new_of[d]][c] = bw;
            exit_head[new_of[d]] = bh;
        }
    }

    auto sub = cle_solve(c, w2);
    if (!sub) return std::nullopt;

    std::vector<int> head(n + 1, -1);
    int entry_head_new = (*sub)[c];
    int entry = entry_node[entry_head_new];
    for (int v : cycle) head[v] = best[v];
    head[entry] = old_of[entry_head_new];
    for (int d2 = 1; d2 < c; ++d2) {
        int h2 = (*sub)[d2];
        head[old_of[d2]] = h2 == c ? exit_head[d2] : old_of[h2];
    }
    return head;
}

struct Vote {
    double weight = 0.0;
    int first_member = std::numeric_limits<int>::max();

    void add(double w, int member) {
        weight += w;
        first_member = std::min(first_member, member);
    }
    bool beats(const Vote& other) const {
        if (weight != other.weight) return weight > other.weight;
        return first_member < other.first_member;
    }
};

// Word tokens of a sentence in surface order.
std::vector<const Token*> words_of(const Sentence& s) {
    std::vector<const Token*> out;
    for (const Token& t : s.tokens)
        if (t.id.is_word()) out.push_back(&t);
    return out;
}

bool valid_tree(const std::vector<int>& head, int n) {
    int roots = 0;
    for (int t = 1; t <= n; ++t)
        if (head[t] == 0) ++roots;
    if (roots != 1) return false;
    for (int start = 1; start <= n; ++start) {
        int v = start;
        for (int steps = 0; v != 0; ++steps) {
            if (steps > n) return false;  // cycle
            v = head[v];
        }
    }
    return true;
}

template <typename Value>
Value plurality(const std::vector<Value>& candidates, const std::vector<double>& weights) {
    std::map<std::string, Vote> votes;
    std::map<std::string, const Value*> value_of;
    for (std::size_t m = 0; m < candidates.size(); ++m) {
        std::ostringstream key_stream;
        if constexpr (std::is_same_v<Value, std::string>) {
            key_stream << candidates[m];
        } else {
            for (const auto& [k, v] : candidates[m]) key_stream << k << '=' << v << '|';
        }
        std::string key = key_stream.str();
        votes[key].add(weights[m], static_cast<int>(m));
        value_of.emplace(key, &candidates[m]);
    }
    const std::string* best_key = nullptr;
    for (const auto& [key, vote] : votes)
        if (!best_key || vote.beats(votes.at(*best_key))) best_key = &key;
    return *value_of.at(*best_key);
}

Sentence combine_sentence(const EnsembleInput& input, std::size_t index) {
    const Sentence& base = input.members[0][index];
    std::size_t n_members = input.members.size();
    std::vector<const Sentence*> sentences(n_members);
    for (std::size_t m = 0; m < n_members; ++m) sentences[m] = &input.members[m][index];

    std::vector<std::vector<const Token*>> words(n_members);
    for (std::size_t m = 0; m < n_members; ++m) {
        words[m] = words_of(*sentences[m]);
        if (sentences[m]->tokens.size() != base.tokens.size())
            throw InputError("ensemble members disagree on tokenization at sentence " +
                             std::to_string(index + 1));
        for (std::size_t i = 0; i < base.tokens.size(); ++i) {
            const Token& a = base.tokens[i];
            const Token& b = sentences[m]->tokens[i];
            if (!(a.id == b.id) || a.form != b.form)
                throw InputError("ensemble members disagree on tokenization at sentence " +
                                 std::to_string(index + 1) + ", token " + a.id.str());
        }
    }

    int n = static_cast<int>(words[0].size());
    std::vector<std::map<int, Vote>> head_votes(n + 1);
    std::vector<std::map<int, std::map<std::string, Vote>>> label_votes(n + 1);
    for (std::size_t m = 0; m < n_members; ++m) {
        for (int t = 1; t <= n; ++t) {
            const Token& token = *words[m][t - 1];
            if (!token.head)
                throw InputError("ensemble member " + std::to_string(m + 1) +
                                 " lacks a basic head at sentence " +
                                 std::to_string(index + 1) + ", word " + std::to_string(t));
            head_votes[t][*token.head].add(input.weights[m], static_cast<int>(m));
            label_votes[t][*token.head][token.deprel].add(input.weights[m],
                                                          static_cast<int>(m));
        }
    }

    std::vector<int> head(n + 1, -1);
    for (int t = 1; t <= n; ++t) {
        const Vote* best = nullptr;
        for (const auto& [h, vote] : head_votes[t]) {
            if (!best || vote.beats(*best)) {
                best = &vote;
                head[t] = h;
            }
        }
    }

    if (!valid_tree(head, n)) {
        std::vector<std::vector<double>> w(n + 1, std::vector<double>(n + 1, kNegInf));
        for (int t = 1; t <= n; ++t)
            for (const auto& [h, vote] : head_votes[t]) w[t][h] = vote.weight;

        std::optional<std::vector<int>> repaired;
        double best_total = kNegInf;
        for (int r = 1; r <= n; ++r) {
            if (!head_votes[r].count(0)) continue;
            std::vector<std::vector<double>> forced = w;
            for (int t = 1; t <= n; ++t)
                if (t != r) forced[t][0] = kNegInf;
            for (int h = 1; h <= n; ++h) forced[r][h] = kNegInf;
            auto result = cle_solve(n, forced);
            if (!result) continue;
            double total = 0.0;
            for (int t = 1; t <= n; ++t) total += w[t][(*result)[t]];
            if (total > best_total) {
                best_total = total;
                repaired = result;
            }
        }
        if (repaired) {
            head = *repaired;
        } else {
            // No spanning arborescence over the voted arcs; copy the member
            // tree that agrees most with the vote mass.
            std::size_t best_member = 0;
            double best_score = kNegInf;
            for (std::size_t m = 0; m < n_members; ++m) {
                double total = 0.0;
                for (int t = 1; t <= n; ++t)
                    total += head_votes[t].at(*words[m][t - 1]->head).weight;
                if (total > best_score) {
                    best_score = total;
                    best_member = m;
                }
            }
            for (int t = 1; t <= n; ++t) head[t] = *words[best_member][t - 1]->head;
        }
    }

    Sentence out = base;
    std::vector<double> weights = input.weights;
    int word_index = 0;
    for (std::size_t i = 0; i < out.tokens.size(); ++i) {
        Token& token = out.tokens[i];
        std::vector<std::string> lemmas, uposes, xposes, miscs;
        std::vector<std::vector<std::pair<std::string, std::string>>> featss;
        for (std::size_t m = 0; m < n_members; ++m) {
            const Token& source = sentences[m]->tokens[i];
            lemmas.push_back(source.lemma);
            uposes.push_back(source.upos);
            xposes.push_back(source.xpos);
            miscs.push_back(source.misc);
            featss.push_back(source.feats);
        }
        token.lemma = plurality(lemmas, weights);
        token.upos = plurality(uposes, weights);
        token.xpos = plurality(xposes, weights);
        token.misc = plurality(miscs, weights);
        token.feats = plurality(featss, weights);
        token.deps.clear();
        if (token.id.is_word()) {
            ++word_index;
            int h = head[word_index];
            token.head = h;
            const Vote* best = nullptr;
            const std::string* best_label = nullptr;
            for (const auto& [label, vote] : label_votes[word_index][h]) {
                if (!best || vote.beats(*best)) {
                    best = &vote;
                    best_label = &label;
                }
            }
            token.deprel = *best_label;
        }
    }
    return out;
}

}  // namespace

std::optional<std::vector<int>> max_arborescence(
    const std::vector<std::vector<double>>& weight) {
    int n = static_cast<int>(weight.size()) - 1;
    if (n < 0) throw std::invalid_argument("empty weight matrix");
    for (const auto& row : weight)
        if (static_cast<int>(row.size()) != n + 1)
            throw std::invalid_argument("weight matrix must be square");
    if (n == 0) return std::vector<int>{-1};
    return cle_solve(n, weight);
}

std::vector<Sentence> combine(const EnsembleInput& input) {
    if (input.members.empty()) throw InputError("ensemble needs at least one member");
    EnsembleInput in = input;
    if (in.weights.empty()) in.weights.assign(in.members.size(), 1.0);
    if (in.weights.size() != in.members.size())
        throw InputError("ensemble has " + std::to_string(in.members.size()) +
                         " members but " + std::to_string(in.weights.size()) + " weights");
    for (double w : in.weights)
        if (!(w > 0.0)) throw InputError("ensemble weights must be positive");
    for (std::size_t m = 1; m < in.members.size(); ++m)
        if (in.members[m].size() != in.members[0].size())
            throw InputError("ensemble members disagree on sentence count");

    std::vector<Sentence> out;
    out.reserve(in.members[0].size());
    for (std::size_t i = 0; i < in.members[0].size(); ++i)
        out.push_back(combine_sentence(in, i));
    return out;
}

}  // namespace eud
