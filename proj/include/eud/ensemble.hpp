#pragma once

#include <optional>
#include <vector>

#include "eud/conllu.hpp"

namespace eud {

// Basic-tree predictions from several models over identical tokenization.
// Weights default to 1 per member and must be positive.
struct EnsembleInput {
    std::vector<std::vector<Sentence>> members;
    std::vector<double> weights;
};

// Per-token head voting with tree-validity repair: each word takes the head
// with the highest summed member weight (ties toward the lowest member
// index). When the assignment is cyclic or lacks exactly one root, the
// maximum-weight spanning arborescence over the voted arcs repairs it, forcing
// a single root child; if no arborescence exists over the voted arcs, the
// highest-total-weight member's tree is copied for that sentence. Labels are
// the highest-voted deprel for each chosen (token, head) arc; other predicted
// columns resolve by weighted per-token plurality.
std::vector<Sentence> combine(const EnsembleInput& input);

// Maximum-weight spanning arborescence rooted at node 0 (Chu-Liu/Edmonds).
// weight[d][h] is the score of making h the head of d, for d in 1..n and
// h in 0..n; use -infinity for absent arcs (row 0 is ignored). Returns the
// chosen head per node (index 0 holds -1), or nullopt when no spanning
// arborescence exists.
std::optional<std::vector<int>> max_arborescence(
    const std::vector<std::vector<double>>& weight);

}  // namespace eud
