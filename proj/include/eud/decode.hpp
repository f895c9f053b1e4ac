#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "eud/graph.hpp"

namespace eud {

// Per-sentence edge-existence probabilities and per-cell best labels, as
// produced by an external scorer. Matrices are dense row-major
// [dependent][head] over n_words + n_empty + 1 nodes; row 0 (ROOT as
// dependent) is ignored by decoding and must be all zeros.
struct EdgeProbabilities {
    std::string sent_id;
    int n_words = 0;
    int n_empty = 0;
    std::vector<std::string> label_vocab;
    std::vector<double> edge_prob;  // n_nodes^2 values in [0,1]
    std::vector<int> best_label;    // n_nodes^2 indices into label_vocab

    int n_nodes() const { return n_words + n_empty + 1; }
    double prob(int dep, int head) const { return edge_prob[dep * n_nodes() + head]; }
    const std::string& label(int dep, int head) const {
        return label_vocab[best_label[dep * n_nodes() + head]];
    }

    void validate() const;  // throws InputError on shape or range violations
};

// Threshold decoding with highest-probability fallback: each dependent takes
// every head whose probability strictly exceeds the threshold, or the single
// argmax head (smallest index on ties) when none does. No cycle removal, no
// global constraints; the result may be fragmented.
EnhancedGraph decode(const EdgeProbabilities& p, double threshold = 0.5);

enum class Direction { Left, Right };
enum class DistanceBucket { Short, Medium, Far, LongRange };

// Head position relative to a dependent: direction plus bucketed distance
// (1-4 short, 5-9 medium, 10-14 far, 15+ long-range).
struct HeadFeature {
    Direction direction;
    DistanceBucket bucket;

    bool operator==(const HeadFeature&) const = default;
};

HeadFeature head_feature(int dependent, int head);

// JSON-lines interchange: one object per sentence with fields sent_id,
// n_words, n_empty, labels, edge_prob, best_label (matrices row-major).
std::vector<EdgeProbabilities> load_probabilities(std::istream& input);
std::vector<EdgeProbabilities> load_probabilities_file(const std::string& path);
void save_probabilities(const std::vector<EdgeProbabilities>& records, std::ostream& out);

}  // namespace eud
