#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eud/conllu.hpp"

namespace eud {

enum class LabelMode { Full, Coarse };

// Precision/recall/F1 over enhanced edges, in percent. Coarse mode truncates
// labels at the first ':' ("nmod:of" -> "nmod").
struct ElasReport {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    LabelMode mode = LabelMode::Full;

    double precision() const;
    double recall() const;
    double f1() const;

    bool operator==(const ElasReport&) const = default;
};

struct TreebankScore {
    std::string treebank;
    std::string language;
    ElasReport report;
};

struct MacroReport {
    std::vector<std::pair<std::string, ElasReport>> per_treebank;
    double treebank_average = 0.0;  // mean of per-treebank F1
    double language_average = 0.0;  // mean over languages of per-language mean F1
    std::map<std::string, std::string> language_of;
};

// Compares gold and system enhanced edges per sentence as sets of
// (head id, dependent id, label). Requires equal sentence counts and, per
// sentence, identical word counts and forms; empty-node counts may differ,
// and an edge whose head names an empty node only matches when both sides
// realize that empty node id.
ElasReport score(const std::vector<Sentence>& gold, const std::vector<Sentence>& system,
                 LabelMode mode = LabelMode::Full);

MacroReport macro(const std::vector<TreebankScore>& reports);

// ELAS precision of the two repaired outputs against the same gold.
std::pair<double, double> precision_delta(const std::vector<Sentence>& gold,
                                          const std::vector<Sentence>& naive_fixed,
                                          const std::vector<Sentence>& greedy_fixed);

}  // namespace eud
