#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eud/eval.hpp"
#include "eud/graph.hpp"

namespace eud {

// The heuristic rules that turn a copied basic tree into an enhanced graph.
// CaseLemma appends case-marker lemmas to nmod/obl labels, CaseFeat appends
// the dependent's Case feature value instead, ConjLemma appends conjunction
// lemmas to conj labels, and RelClauseRef adds relative-clause co-reference
// edges. The two case variants are mutually exclusive.
enum class Rule { CaseLemma, CaseFeat, ConjLemma, RelClauseRef };

std::string_view rule_name(Rule rule);
std::optional<Rule> rule_from_name(std::string_view name);

class RuleSet {
public:
    RuleSet() = default;
    RuleSet(std::initializer_list<Rule> rules);

    void enable(Rule rule);  // throws InputError when both case rules would combine
    bool contains(Rule rule) const;
    bool empty() const { return bits_ == 0; }
    int size() const;
    std::vector<Rule> rules() const;  // ascending declaration order
    std::string str() const;          // e.g. "case_lemma+conj_lemma", "(none)"

    // All 12 admissible subsets (2^4 minus those combining the case rules),
    // ordered by size then lexicographically; subset search ties resolve to
    // the earliest entry.
    static const std::vector<RuleSet>& admissible_subsets();

    bool operator==(const RuleSet&) const = default;

private:
    unsigned bits_ = 0;
};

// The copied basic tree: one edge per word from HEAD/DEPREL. Empty nodes in
// the sentence become isolated graph nodes (basic trees do not attach them).
EnhancedGraph copy_basic(const Sentence& s);

// `mode` must be CaseLemma or CaseFeat. Rules only rewrite labels of existing
// edges or add edges; they read the basic tree in `s` and are total.
EnhancedGraph apply_case_rule(const EnhancedGraph& g, const Sentence& s, Rule mode);
EnhancedGraph apply_conj_rule(const EnhancedGraph& g, const Sentence& s);
EnhancedGraph apply_relcl_rule(const EnhancedGraph& g, const Sentence& s);

// copy_basic plus the enabled rules in fixed order: case, conj, relcl.
EnhancedGraph enhance(const Sentence& s, const RuleSet& rules);
std::vector<Sentence> enhance_document(const std::vector<Sentence>& sentences,
                                       const RuleSet& rules);

struct SubsetSearchResult {
    RuleSet rules;
    ElasReport report;
};

// Exhaustive search over the admissible subsets, maximizing full-label ELAS F1
// of the enhanced predicted trees against gold; ties break toward the smaller
// subset, then lexicographic rule order.
SubsetSearchResult best_rule_subset(const std::vector<Sentence>& dev_gold,
                                    const std::vector<Sentence>& dev_pred_basic);

}  // namespace eud
