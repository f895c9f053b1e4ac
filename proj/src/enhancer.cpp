#include "eud/enhancer.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>

namespace eud {

namespace {

constexpr std::array<Rule, 4> kAllRules = {Rule::CaseLemma, Rule::CaseFeat,
                                           Rule::ConjLemma, Rule::RelClauseRef};

unsigned bit(Rule r) { return 1u << static_cast<unsigned>(r); }

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Word indices of each word's direct dependents in the basic tree.
std::vector<std::vector<int>> basic_children(const Sentence& s) {
    std::vector<std::vector<int>> children(s.word_count() + 1);
    for (const Token& t : s.tokens) {
        if (!t.id.is_word() || !t.head) continue;
        children[*t.head].push_back(t.id.index());
    }
    return children;
}

}  // namespace

std::string_view rule_name(Rule rule) {
    switch (rule) {
        case Rule::CaseLemma: return "case_lemma";
        case Rule::CaseFeat: return "case_feat";
        case Rule::ConjLemma: return "conj_lemma";
        case Rule::RelClauseRef: return "relcl_ref";
    }
    return "?";
}

std::optional<Rule> rule_from_name(std::string_view name) {
    for (Rule r : kAllRules)
        if (rule_name(r) == name) return r;
    return std::nullopt;
}

RuleSet::RuleSet(std::initializer_list<Rule> rules) {
    for (Rule r : rules) enable(r);
}

void RuleSet::enable(Rule rule) {
    unsigned next = bits_ | bit(rule);
    if ((next & bit(Rule::CaseLemma)) && (next & bit(Rule::CaseFeat)))
        throw InputError("rules case_lemma and case_feat are mutually exclusive");
    bits_ = next;
}

bool RuleSet::contains(Rule rule) const { return bits_ & bit(rule); }

int RuleSet::size() const { return std::popcount(bits_); }

std::vector<Rule> RuleSet::rules() const {
    std::vector<Rule> out;
    for (Rule r : kAllRules)
        if (contains(r)) out.push_back(r);
    return out;
}

std::string RuleSet::str() const {
    if (empty()) return "(none)";
    std::string out;
    for (Rule r : rules()) {
        if (!out.empty()) out += '+';
        out += rule_name(r);
    }
    return out;
}

const std::vector<RuleSet>& RuleSet::admissible_subsets() {
    static const std::vector<RuleSet> subsets = [] {
        std::vector<RuleSet> out;
        for (unsigned mask = 0; mask < 16; ++mask) {
            if ((mask & bit(Rule::CaseLemma)) && (mask & bit(Rule::CaseFeat))) continue;
            RuleSet set;
            for (Rule r : kAllRules)
                if (mask & bit(r)) set.enable(r);
            out.push_back(set);
        }
        std::sort(out.begin(), out.end(), [](const RuleSet& a, const RuleSet& b) {
            if (a.size() != b.size()) return a.size() < b.size();
            return a.rules() < b.rules();
        });
        return out;
    }();
    return subsets;
}

EnhancedGraph copy_basic(const Sentence& s) {
    EnhancedGraph g(s.word_count(), s.empty_count());
    for (const Token& t : s.tokens) {
        if (!t.id.is_word()) continue;
        if (!t.head)
            throw InputError("word " + t.id.str() + " has no basic head");
        g.add_edge(*t.head, t.id.index(), t.deprel);
    }
    return g;
}

EnhancedGraph apply_case_rule(const EnhancedGraph& g, const Sentence& s, Rule mode) {
    if (mode != Rule::CaseLemma && mode != Rule::CaseFeat)
        throw std::invalid_argument("case rule mode must be CaseLemma or CaseFeat");
    auto children = basic_children(s);
    EnhancedGraph out = g;
    for (const Edge& e : g.edges()) {
        if (e.label != "nmod" && e.label != "obl") continue;
        if (e.dep < 1 || e.dep > s.word_count()) continue;
        std::string suffix;
        for (int c : children[e.dep]) {
            const Token& child = s.word(c);
            if (child.deprel != "case") continue;
            if (!suffix.empty()) suffix += '_';
            suffix += ascii_lower(child.lemma);
        }
        if (suffix.empty()) continue;  // no case marker, edge unchanged
        if (mode == Rule::CaseFeat) {
            auto value = s.word(e.dep).feat("Case");
            if (!value) continue;
            suffix = ascii_lower(*value);
        }
        out.remove_edge(e);
        out.add_edge(e.head, e.dep, e.label + ":" + suffix);
    }
    return out;
}

EnhancedGraph apply_conj_rule(const EnhancedGraph& g, const Sentence& s) {
    auto children = basic_children(s);
    EnhancedGraph out = g;
    for (const Edge& e : g.edges()) {
        if (e.label != "conj") continue;
        if (e.dep < 1 || e.dep > s.word_count()) continue;
        for (int c : children[e.dep]) {
            if (s.word(c).deprel != "cc") continue;
            out.remove_edge(e);
            out.add_edge(e.head, e.dep, "conj:" + ascii_lower(s.word(c).lemma));
            break;  // first conjunction in surface order
        }
    }
    return out;
}

EnhancedGraph apply_relcl_rule(const EnhancedGraph& g, const Sentence& s) {
    auto children = basic_children(s);
    EnhancedGraph out = g;
    for (const Edge& e : g.edges()) {
        if (e.label.rfind("acl:relcl", 0) != 0) continue;
        int antecedent = e.head;
        int clause_head = e.dep;
        if (antecedent < 1 || clause_head < 1 || clause_head > s.word_count()) continue;
        int pronoun = 0;
        for (int c : children[clause_head]) {
            if (!s.word(c).feat_has("PronType", "Rel")) continue;
            pronoun = c;
            break;  // leftmost relative pronoun
        }
        if (pronoun == 0 || pronoun == antecedent) continue;
        out.add_edge(antecedent, pronoun, "ref");
        // The antecedent takes over the pronoun's roles inside the clause.
        for (const Edge& p : g.edges_to(pronoun)) {
            if (p.head != clause_head) continue;
            out.add_edge(clause_head, antecedent, p.label);
        }
    }
    return out;
}

EnhancedGraph enhance(const Sentence& s, const RuleSet& rules) {
    EnhancedGraph g = copy_basic(s);
    if (rules.contains(Rule::CaseLemma))
        g = apply_case_rule(g, s, Rule::CaseLemma);
    else if (rules.contains(Rule::CaseFeat))
        g = apply_case_rule(g, s, Rule::CaseFeat);
    if (rules.contains(Rule::ConjLemma)) g = apply_conj_rule(g, s);
    if (rules.contains(Rule::RelClauseRef)) g = apply_relcl_rule(g, s);
    return g;
}

std::vector<Sentence> enhance_document(const std::vector<Sentence>& sentences,
                                       const RuleSet& rules) {
    std::vector<Sentence> out;
    out.reserve(sentences.size());
    for (const Sentence& s : sentences) out.push_back(to_sentence(enhance(s, rules), s));
    return out;
}

SubsetSearchResult best_rule_subset(const std::vector<Sentence>& dev_gold,
                                    const std::vector<Sentence>& dev_pred_basic) {
    std::optional<SubsetSearchResult> best;
    for (const RuleSet& rules : RuleSet::admissible_subsets()) {
        ElasReport report =
            score(dev_gold, enhance_document(dev_pred_basic, rules), LabelMode::Full);
        if (!best || report.f1() > best->report.f1())
            best = SubsetSearchResult{rules, report};
    }
    return *best;
}

}  // namespace eud
