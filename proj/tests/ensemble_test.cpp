#include "eud/ensemble.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace eud;
using oracles::best_tree_weight;
using oracles::is_valid_tree;
using oracles::vote_weight_of;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<Sentence> doc_of(const std::vector<int>& heads,
                             const std::vector<std::string>& deprels) {
    return {testutil::basic_sentence(heads, deprels)};
}

}  // namespace

TEST_CASE("identical members combine to themselves") {
    auto doc = doc_of({2, 0, 2}, {"nsubj", "root", "obj"});
    EnsembleInput input{{doc, doc, doc}, {}};
    CHECK(combine(input) == doc);
}

TEST_CASE("per-token majority wins") {
    EnsembleInput input;
    input.members.push_back(doc_of({2, 0, 2, 2, 2}, {"a", "root", "c", "d", "e"}));
    input.members.push_back(doc_of({2, 0, 2, 2, 2}, {"a", "root", "c", "d", "e"}));
    input.members.push_back(doc_of({2, 0, 2, 5, 2}, {"a", "root", "c", "x", "e"}));
    auto out = combine(input);
    CHECK(*out[0].word(4).head == 2);
    CHECK(out[0].word(4).deprel == "d");
}

TEST_CASE("head votes and labels resolve independently") {
    // Same head from two members with different labels: label vote picks the
    // earliest member on ties.
    EnsembleInput input;
    input.members.push_back(doc_of({2, 0}, {"obj", "root"}));
    input.members.push_back(doc_of({2, 0}, {"iobj", "root"}));
    input.members.push_back(doc_of({0, 1}, {"root", "obj"}));
    auto out = combine(input);
    CHECK(*out[0].word(1).head == 2);
    CHECK(out[0].word(1).deprel == "obj");
}

TEST_CASE("cyclic majorities repair to the maximum-weight arborescence") {
    // Three valid member trees whose per-token majorities form the cycle
    // 2 -> 4 -> 3 -> 2.
    EnsembleInput input;
    input.members.push_back(doc_of({0, 3, 4, 1}, {"root", "b", "c", "d"}));
    input.members.push_back(doc_of({0, 1, 4, 2}, {"root", "x", "c", "y"}));
    input.members.push_back(doc_of({0, 3, 1, 2}, {"root", "b", "z", "y"}));
    for (const auto& member : input.members) CHECK(is_valid_tree(member[0]));

    auto out = combine(input);
    REQUIRE(out.size() == 1);
    CHECK(is_valid_tree(out[0]));
    // The repair reaches the brute-force optimum over voted arcs.
    CHECK(vote_weight_of(input, out[0], 0) == doctest::Approx(best_tree_weight(input, 0)));
    CHECK(best_tree_weight(input, 0) == doctest::Approx(8.0));
}

TEST_CASE("max_arborescence matches brute force on random vote matrices") {
    std::mt19937 rng(606);
    std::uniform_int_distribution<int> words(2, 5);
    std::uniform_int_distribution<int> members(1, 3);
    for (int round = 0; round < 200; ++round) {
        int n = words(rng);
        EnsembleInput input;
        for (int m = members(rng); m-- > 0;)
            input.members.push_back({testutil::random_tree_sentence(rng, n)});
        std::vector<std::vector<double>> weight(n + 1,
                                                std::vector<double>(n + 1, kNegInf));
        for (const auto& member : input.members)
            for (int t = 1; t <= n; ++t) {
                int h = *member[0].word(t).head;
                if (weight[t][h] == kNegInf) weight[t][h] = 0.0;
                weight[t][h] += 1.0;
            }
        auto result = max_arborescence(weight);
        REQUIRE(result.has_value());
        double total = 0.0;
        for (int t = 1; t <= n; ++t) total += weight[t][(*result)[t]];
        // Arborescences allow several root children; compare against the
        // combiner which forces one, so only check it is an upper bound.
        CHECK(total >= best_tree_weight(input, 0) - 1e-9);
    }
}

TEST_CASE("random ensembles always produce valid single-root trees") {
    std::mt19937 rng(123321);
    std::uniform_int_distribution<int> words(1, 8);
    for (int round = 0; round < 300; ++round) {
        int n = words(rng);
        EnsembleInput input;
        for (int m = 0; m < 3; ++m)
            input.members.push_back({testutil::random_tree_sentence(rng, n)});
        auto out = combine(input);
        REQUIRE(out.size() == 1);
        CHECK(is_valid_tree(out[0]));
    }
}

TEST_CASE("unanimous decisions are preserved") {
    // Members start from a shared tree and mutate disjoint random tokens;
    // tokens no member touched must come through unchanged.
    std::mt19937 rng(456654);
    std::uniform_int_distribution<int> words(3, 8);
    for (int round = 0; round < 200; ++round) {
        int n = words(rng);
        Sentence base = testutil::random_tree_sentence(rng, n);
        std::vector<char> touched(n + 1, 0);
        EnsembleInput input;
        for (int m = 0; m < 3; ++m) {
            Sentence member = base;
            int mutations = std::uniform_int_distribution<int>(0, n / 2)(rng);
            for (int k = 0; k < mutations; ++k) {
                int t = std::uniform_int_distribution<int>(1, n)(rng);
                if (*member.tokens[t - 1].head == 0) continue;  // keep the root
                // Re-attach outside t's subtree so the member stays a tree.
                std::vector<char> in_subtree(n + 1, 0);
                in_subtree[t] = 1;
                for (bool changed = true; changed;) {
                    changed = false;
                    for (int v = 1; v <= n; ++v)
                        if (!in_subtree[v] && in_subtree[*member.tokens[v - 1].head]) {
                            in_subtree[v] = 1;
                            changed = true;
                        }
                }
                std::vector<int> candidates;
                for (int h = 1; h <= n; ++h)
                    if (!in_subtree[h]) candidates.push_back(h);
                if (candidates.empty()) continue;
                member.tokens[t - 1].head = candidates[
                    std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng)];
                member.tokens[t - 1].deprel = "mut" + std::to_string(m);
                touched[t] = 1;
            }
            REQUIRE(is_valid_tree(member));
            input.members.push_back({member});
        }
        auto out = combine(input);
        CHECK(is_valid_tree(out[0]));
        for (int t = 1; t <= n; ++t) {
            if (touched[t]) continue;
            CHECK(*out[0].word(t).head == *base.word(t).head);
            CHECK(out[0].word(t).deprel == base.word(t).deprel);
        }
    }
}

TEST_CASE("partially unanimous tokens survive repair") {
    // Members disagree wildly on t2..t4 (forming a cycle) but all agree on
    // t5's head; the only voted arc into t5 is the unanimous one.
    EnsembleInput input;
    input.members.push_back(doc_of({0, 3, 4, 1, 1}, {"root", "b", "c", "d", "u"}));
    input.members.push_back(doc_of({0, 1, 4, 2, 1}, {"root", "x", "c", "y", "u"}));
    input.members.push_back(doc_of({0, 3, 1, 2, 1}, {"root", "b", "z", "y", "u"}));
    auto out = combine(input);
    CHECK(is_valid_tree(out[0]));
    CHECK(*out[0].word(5).head == 1);
    CHECK(out[0].word(5).deprel == "u");
}

TEST_CASE("weight scaling does not change the result") {
    std::mt19937 rng(987);
    std::uniform_int_distribution<int> words(2, 7);
    for (int round = 0; round < 100; ++round) {
        int n = words(rng);
        EnsembleInput input;
        for (int m = 0; m < 3; ++m)
            input.members.push_back({testutil::random_tree_sentence(rng, n)});
        input.weights = {1.0, 2.0, 1.5};
        auto base = combine(input);
        input.weights = {4.0, 8.0, 6.0};
        CHECK(combine(input) == base);
    }
}

TEST_CASE("non-tree columns resolve by weighted plurality") {
    auto m0 = doc_of({2, 0}, {"nsubj", "root"});
    auto m1 = m0;
    auto m2 = m0;
    m0[0].tokens[0].lemma = "a";
    m1[0].tokens[0].lemma = "b";
    m2[0].tokens[0].lemma = "b";
    m0[0].tokens[1].upos = "VERB";
    m1[0].tokens[1].upos = "AUX";
    m2[0].tokens[1].upos = "NOUN";
    EnsembleInput input{{m0, m1, m2}, {}};
    auto out = combine(input);
    CHECK(out[0].tokens[0].lemma == "b");   // 2-vote plurality
    CHECK(out[0].tokens[1].upos == "VERB");  // tie of singletons: lowest member
    input.weights = {1.0, 5.0, 1.0};
    CHECK(combine(input)[0].tokens[1].upos == "AUX");
}

TEST_CASE("fallback copies the best-agreeing member when no arborescence exists") {
    // Deliberately invalid members (cyclic, no root arc anywhere): the voted
    // arcs admit no spanning arborescence.
    auto cyclic = doc_of({2, 1}, {"a", "b"});
    auto cyclic2 = doc_of({2, 1}, {"c", "d"});
    EnsembleInput input{{cyclic, cyclic2}, {}};
    auto out = combine(input);
    CHECK(*out[0].word(1).head == 2);
    CHECK(*out[0].word(2).head == 1);
    CHECK(out[0].word(1).deprel == "a");  // member 0 wins the fallback tie
}

TEST_CASE("input validation") {
    auto doc = doc_of({0}, {"root"});
    CHECK_THROWS_AS(combine(EnsembleInput{{}, {}}), InputError);
    CHECK_THROWS_AS(combine(EnsembleInput{{doc, doc}, {1.0}}), InputError);
    CHECK_THROWS_AS(combine(EnsembleInput{{doc, doc}, {1.0, 0.0}}), InputError);
    auto other = doc_of({0, 1}, {"root", "obj"});
    CHECK_THROWS_AS(combine(EnsembleInput{{doc, other}, {}}), InputError);
    auto renamed = doc;
    renamed[0].tokens[0].form = "different";
    CHECK_THROWS_AS(combine(EnsembleInput{{doc, renamed}, {}}), InputError);
}
