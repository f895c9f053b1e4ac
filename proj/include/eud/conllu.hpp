#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eud/error.hpp"

namespace eud {

// One CoNLL-U node identity: a regular word ("5"), a multiword token range
// ("3-4"), or an empty node ("5.1"). Empty nodes carry elided tokens and take
// part in enhanced graphs only.
class TokenId {
public:
    enum class Kind { Word, Range, Empty };

    static TokenId word(int index);
    static TokenId range(int start, int end);
    static TokenId empty(int base, int sub);

    // Parses an ID column value. Word index 0 is rejected here; DEPS heads go
    // through parse_dep_head, where "0" names the notional ROOT.
    static std::optional<TokenId> parse(std::string_view text);
    static std::optional<TokenId> parse_dep_head(std::string_view text);

    Kind kind() const { return kind_; }
    bool is_word() const { return kind_ == Kind::Word; }
    bool is_range() const { return kind_ == Kind::Range; }
    bool is_empty() const { return kind_ == Kind::Empty; }

    int index() const { return a_; }  // Word
    int start() const { return a_; }  // Range
    int end() const { return b_; }    // Range
    int base() const { return a_; }   // Empty
    int sub() const { return b_; }    // Empty

    std::string str() const;

    // Document-order sort key: a range sorts just before its first word, an
    // empty node after its base word. DEPS serialization orders heads by this.
    std::pair<int, int> order_key() const;

    bool operator==(const TokenId&) const = default;
    bool operator<(const TokenId& other) const;

private:
    TokenId(Kind k, int a, int b) : kind_(k), a_(a), b_(b) {}

    Kind kind_;
    int a_;
    int b_;
};

struct DepsEntry {
    TokenId head;  // word (0 = notional ROOT) or empty node; never a range
    std::string label;

    bool operator==(const DepsEntry&) const = default;
};

struct Token {
    TokenId id = TokenId::word(1);
    std::string form = "_";
    std::string lemma = "_";
    std::string upos = "_";
    std::string xpos = "_";
    std::vector<std::pair<std::string, std::string>> feats;  // canonical order
    std::optional<int> head;  // HEAD column; nullopt when "_"
    std::string deprel = "_";
    std::vector<DepsEntry> deps;  // canonical order (head id, then label)
    std::string misc = "_";

    std::optional<std::string> feat(std::string_view key) const;
    // True when the feature value, read as a comma-separated set, contains v.
    bool feat_has(std::string_view key, std::string_view v) const;

    bool operator==(const Token&) const = default;
};

struct Sentence {
    std::vector<std::string> comments;  // verbatim lines, leading '#' included
    std::vector<Token> tokens;          // document order: ranges, words, empties

    int word_count() const;
    int empty_count() const;
    const Token& word(int index) const;  // 1-based lookup among word tokens

    // Value of "# key = value" comment, if present.
    std::optional<std::string> meta(std::string_view key) const;
    std::string sent_id() const;  // "" when absent

    bool operator==(const Sentence&) const = default;
};

// Sorts every token's feats and deps into canonical order, then validates.
// Hand-built sentences should pass through here before serialization.
void canonicalize(Sentence& sentence);

// Checks all Sentence invariants; throws InputError naming the offending
// token. Serialization validates implicitly.
void validate(const Sentence& sentence);

std::vector<Sentence> parse_document(std::istream& input);
std::vector<Sentence> parse_document(std::string_view input);
std::vector<Sentence> parse_file(const std::string& path);

void serialize_document(const std::vector<Sentence>& sentences, std::ostream& out);
std::string serialize_to_string(const std::vector<Sentence>& sentences);
void serialize_to_file(const std::vector<Sentence>& sentences, const std::string& path);

}  // namespace eud
