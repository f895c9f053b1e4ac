#include "eud/eval.hpp"

#include <algorithm>
#include <set>

namespace eud {

namespace {

// Edge keys are "head\tdep\tlabel" strings. Heads naming an empty node the
// sentence does not realize get a side-specific prefix so they can never
// match the other side.
std::set<std::string> edge_keys(const Sentence& s, LabelMode mode, const char* side) {
    std::set<std::string> realized;
    for (const Token& t : s.tokens)
        if (t.id.is_empty()) realized.insert(t.id.str());

    std::set<std::string> keys;
    for (const Token& t : s.tokens) {
        if (t.id.is_range()) continue;
        std::string dep = t.id.str();
        for (const DepsEntry& e : t.deps) {
            std::string head = e.head.str();
            if (e.head.is_empty() && !realized.count(head)) head = std::string(side) + head;
            std::string label = e.label;
            if (mode == LabelMode::Coarse)
                if (std::size_t colon = label.find(':'); colon != std::string::npos)
                    label.resize(colon);
            keys.insert(head + '\t' + dep + '\t' + label);
        }
    }
    return keys;
}

void check_alignment(const Sentence& gold, const Sentence& system, std::size_t index) {
    std::vector<const Token*> gw, sw;
    for (const Token& t : gold.tokens)
        if (t.id.is_word()) gw.push_back(&t);
    for (const Token& t : system.tokens)
        if (t.id.is_word()) sw.push_back(&t);
    if (gw.size() != sw.size())
        throw InputError("tokenization mismatch at sentence " + std::to_string(index + 1) +
                         ": " + std::to_string(gw.size()) + " vs " +
                         std::to_string(sw.size()) + " words");
    for (std::size_t i = 0; i < gw.size(); ++i)
        if (gw[i]->form != sw[i]->form)
            throw InputError("tokenization mismatch at sentence " + std::to_string(index + 1) +
                             ", word " + std::to_string(i + 1) + ": '" + gw[i]->form +
                             "' vs '" + sw[i]->form + "'");
}

double ratio(long long num, long long den) {
    return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double ElasReport::precision() const { return ratio(tp, tp + fp); }
double ElasReport::recall() const { return ratio(tp, tp + fn); }

double ElasReport::f1() const {
    double p = precision();
    double r = recall();
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

ElasReport score(const std::vector<Sentence>& gold, const std::vector<Sentence>& system,
                 LabelMode mode) {
    if (gold.size() != system.size())
        throw InputError("sentence count mismatch: " + std::to_string(gold.size()) +
                         " gold vs " + std::to_string(system.size()) + " system");
    ElasReport report;
    report.mode = mode;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        check_alignment(gold[i], system[i], i);
        std::set<std::string> g = edge_keys(gold[i], mode, "\x01gold:");
        std::set<std::string> s = edge_keys(system[i], mode, "\x01system:");
        long long common = 0;
        for (const std::string& key : s)
            if (g.count(key)) ++common;
        report.tp += common;
        report.fp += static_cast<long long>(s.size()) - common;
        report.fn += static_cast<long long>(g.size()) - common;
    }
    return report;
}

MacroReport macro(const std::vector<TreebankScore>& reports) {
    if (reports.empty()) throw InputError("macro average over empty report list");
    MacroReport out;
    std::map<std::string, std::vector<double>> by_language;
    double sum = 0.0;
    for (const TreebankScore& r : reports) {
        double f1 = r.report.f1();
        out.per_treebank.emplace_back(r.treebank, r.report);
        out.language_of[r.treebank] = r.language;
        by_language[r.language].push_back(f1);
        sum += f1;
    }
    out.treebank_average = sum / static_cast<double>(reports.size());
    double language_sum = 0.0;
    for (const auto& [language, values] : by_language) {
        double mean = 0.0;
        for (double v : values) mean += v;
        language_sum += mean / static_cast<double>(values.size());
    }
    out.language_average = language_sum / static_cast<double>(by_language.size());
    return out;
}

std::pair<double, double> precision_delta(const std::vector<Sentence>& gold,
                                          const std::vector<Sentence>& naive_fixed,
                                          const std::vector<Sentence>& greedy_fixed) {
    double p_naive = score(gold, naive_fixed, LabelMode::Full).precision();
    double p_greedy = score(gold, greedy_fixed, LabelMode::Full).precision();
    return {p_naive, p_greedy};
}

}  // namespace eud
