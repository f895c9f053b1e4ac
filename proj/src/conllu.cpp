#include "eud/conllu.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace eud {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string ascii_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Decimal integer, no sign, no leading zero unless the value is exactly "0".
bool strict_uint(std::string_view s, int& out) {
    if (s.empty() || s.size() > 9) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    if (s.size() > 1 && s[0] == '0') return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool feat_key_less(const std::pair<std::string, std::string>& a,
                   const std::pair<std::string, std::string>& b) {
    std::string la = ascii_lower(a.first);
    std::string lb = ascii_lower(b.first);
    if (la != lb) return la < lb;
    return a.first < b.first;
}

bool deps_less(const DepsEntry& a, const DepsEntry& b) {
    auto ka = a.head.order_key();
    auto kb = b.head.order_key();
    if (ka != kb) return ka < kb;
    return a.label < b.label;
}

void sort_token(Token& t) {
    std::stable_sort(t.feats.begin(), t.feats.end(), feat_key_less);
    std::stable_sort(t.deps.begin(), t.deps.end(), deps_less);
}

struct Violation {
    int token_index;
    std::string reason;
};

// Structural invariants checked after per-token parsing: id sequencing,
// multiword coverage, column presence rules, HEAD range, uniqueness.
// Assumes feats/deps are already in canonical order.
std::optional<Violation> find_violation(const Sentence& s) {
    if (s.tokens.empty()) return Violation{-1, "sentence has no token lines"};
    int last_word = 0;
    int last_empty_sub = 0;
    int open_range_end = 0;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        int idx = static_cast<int>(i);
        switch (t.id.kind()) {
            case TokenId::Kind::Range:
                if (t.id.start() <= open_range_end)
                    return Violation{idx, "overlapping multiword token ranges"};
                if (t.id.start() != last_word + 1)
                    return Violation{idx, "multiword token range out of position"};
                if (t.head || t.deprel != "_" || !t.deps.empty())
                    return Violation{idx, "multiword token with HEAD, DEPREL or DEPS"};
                open_range_end = t.id.end();
                break;
            case TokenId::Kind::Word:
                if (t.id.index() != last_word + 1)
                    return Violation{idx, "non-consecutive word ids (expected " +
                                              std::to_string(last_word + 1) + ", got " +
                                              t.id.str() + ")"};
                last_word = t.id.index();
                last_empty_sub = 0;
                break;
            case TokenId::Kind::Empty:
                if (t.id.base() != last_word)
                    return Violation{idx, "empty node id " + t.id.str() +
                                              " does not follow word " +
                                              std::to_string(t.id.base())};
                if (t.id.sub() != last_empty_sub + 1)
                    return Violation{idx, "non-consecutive empty node ids"};
                last_empty_sub = t.id.sub();
                if (t.head || t.deprel != "_")
                    return Violation{idx, "empty node with HEAD or DEPREL"};
                break;
        }
        for (std::size_t k = 1; k < t.feats.size(); ++k)
            if (t.feats[k].first == t.feats[k - 1].first)
                return Violation{idx, "duplicate feature key '" + t.feats[k].first + "'"};
        for (std::size_t k = 1; k < t.deps.size(); ++k)
            if (t.deps[k] == t.deps[k - 1])
                return Violation{idx, "duplicate DEPS entry '" + t.deps[k].head.str() +
                                          ":" + t.deps[k].label + "'"};
    }
    if (open_range_end > last_word)
        return Violation{static_cast<int>(s.tokens.size()) - 1,
                         "multiword token range exceeds sentence"};
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        if (!t.id.is_word() || !t.head) continue;
        int idx = static_cast<int>(i);
        if (*t.head > last_word)
            return Violation{idx, "HEAD " + std::to_string(*t.head) + " out of range (" +
                                      std::to_string(last_word) + " words)"};
        if (*t.head == t.id.index())
            return Violation{idx, "token is its own head"};
    }
    return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> parse_feats(const std::string& cell,
                                                             int line_no) {
    std::vector<std::pair<std::string, std::string>> out;
    if (cell == "_") return out;
    for (const std::string& item : split(cell, '|')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
            throw ParseError(line_no, "malformed FEATS entry '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

std::vector<DepsEntry> parse_deps(const std::string& cell, int line_no) {
    std::vector<DepsEntry> out;
    if (cell == "_") return out;
    for (const std::string& item : split(cell, '|')) {
        std::size_t colon = item.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == item.size())
            throw ParseError(line_no, "malformed DEPS entry '" + item + "'");
        std::string head_text = item.substr(0, colon);
        auto head = TokenId::parse_dep_head(head_text);
        if (!head) {
            if (head_text.find('-') != std::string::npos)
                throw ParseError(line_no,
                                 "DEPS head references a multiword token range '" +
                                     head_text + "'");
            throw ParseError(line_no, "malformed DEPS head '" + head_text + "'");
        }
        out.push_back(DepsEntry{*head, item.substr(colon + 1)});
    }
    return out;
}

Token parse_token_line(const std::string& line, int line_no) {
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 10)
        throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                      std::to_string(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i].empty())
            throw ParseError(line_no, "column " + std::to_string(i + 1) + " is empty");

    Token t;
    auto id = TokenId::parse(cols[0]);
    if (!id) throw ParseError(line_no, "malformed token id '" + cols[0] + "'");
    t.id = *id;
    t.form = cols[1];
    t.lemma = cols[2];
    t.upos = cols[3];
    t.xpos = cols[4];
    t.feats = parse_feats(cols[5], line_no);
    if (cols[6] != "_") {
        int h = 0;
        if (!strict_uint(cols[6], h))
            throw ParseError(line_no, "malformed HEAD '" + cols[6] + "'");
        t.head = h;
    }
    t.deprel = cols[7];
    t.deps = parse_deps(cols[8], line_no);
    t.misc = cols[9];
    return t;
}

std::string render_feats(const Token& t) {
    if (t.feats.empty()) return "_";
    auto sorted = t.feats;
    std::stable_sort(sorted.begin(), sorted.end(), feat_key_less);
    std::string out;
    for (const auto& [k, v] : sorted) {
        if (!out.empty()) out += '|';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

std::string render_deps(const Token& t) {
    if (t.deps.empty()) return "_";
    auto sorted = t.deps;
    std::stable_sort(sorted.begin(), sorted.end(), deps_less);
    std::string out;
    for (const DepsEntry& d : sorted) {
        if (!out.empty()) out += '|';
        out += d.head.str();
        out += ':';
        out += d.label;
    }
    return out;
}

}  // namespace

TokenId TokenId::word(int index) { return TokenId(Kind::Word, index, 0); }
TokenId TokenId::range(int start, int end) { return TokenId(Kind::Range, start, end); }
TokenId TokenId::empty(int base, int sub) { return TokenId(Kind::Empty, base, sub); }

std::optional<TokenId> TokenId::parse(std::string_view text) {
    if (std::size_t dash = text.find('-'); dash != std::string_view::npos) {
        int a = 0, b = 0;
        if (!strict_uint(text.substr(0, dash), a)) return std::nullopt;
        if (!strict_uint(text.substr(dash + 1), b)) return std::nullopt;
        if (a < 1 || b <= a) return std::nullopt;
        return range(a, b);
    }
    if (std::size_t dot = text.find('.'); dot != std::string_view::npos) {
        int a = 0, b = 0;
        if (!strict_uint(text.substr(0, dot), a)) return std::nullopt;
        if (!strict_uint(text.substr(dot + 1), b)) return std::nullopt;
        if (a < 0 || b < 1) return std::nullopt;
        return empty(a, b);
    }
    int a = 0;
    if (!strict_uint(text, a) || a < 1) return std::nullopt;
    return word(a);
}

std::optional<TokenId> TokenId::parse_dep_head(std::string_view text) {
    if (text.find('-') != std::string_view::npos) return std::nullopt;
    if (std::size_t dot = text.find('.'); dot != std::string_view::npos) {
        int a = 0, b = 0;
        if (!strict_uint(text.substr(0, dot), a)) return std::nullopt;
        if (!strict_uint(text.substr(dot + 1), b)) return std::nullopt;
        if (b < 1) return std::nullopt;
        return empty(a, b);
    }
    int a = 0;
    if (!strict_uint(text, a)) return std::nullopt;
    return word(a);  // 0 = notional ROOT
}

std::string TokenId::str() const {
    switch (kind_) {
        case Kind::Word: return std::to_string(a_);
        case Kind::Range: return std::to_string(a_) + "-" + std::to_string(b_);
        case Kind::Empty: return std::to_string(a_) + "." + std::to_string(b_);
    }
    return {};
}

std::pair<int, int> TokenId::order_key() const {
    switch (kind_) {
        case Kind::Word: return {a_, 0};
        case Kind::Range: return {a_, -1};
        case Kind::Empty: return {a_, b_};
    }
    return {0, 0};
}

bool TokenId::operator<(const TokenId& other) const {
    auto ka = order_key();
    auto kb = other.order_key();
    if (ka != kb) return ka < kb;
    return b_ < other.b_;  // distinguishes ranges sharing a start
}

std::optional<std::string> Token::feat(std::string_view key) const {
    for (const auto& [k, v] : feats)
        if (k == key) return v;
    return std::nullopt;
}

bool Token::feat_has(std::string_view key, std::string_view v) const {
    auto value = feat(key);
    if (!value) return false;
    for (const std::string& part : split(*value, ','))
        if (part == v) return true;
    return false;
}

int Sentence::word_count() const {
    int n = 0;
    for (const Token& t : tokens)
        if (t.id.is_word()) ++n;
    return n;
}

int Sentence::empty_count() const {
    int n = 0;
    for (const Token& t : tokens)
        if (t.id.is_empty()) ++n;
    return n;
}

const Token& Sentence::word(int index) const {
    for (const Token& t : tokens)
        if (t.id.is_word() && t.id.index() == index) return t;
    throw std::out_of_range("no word with id " + std::to_string(index));
}

std::optional<std::string> Sentence::meta(std::string_view key) const {
    std::string needle = "# " + std::string(key) + " = ";
    for (const std::string& c : comments)
        if (c.rfind(needle, 0) == 0) return c.substr(needle.size());
    return std::nullopt;
}

std::string Sentence::sent_id() const { return meta("sent_id").value_or(""); }

void canonicalize(Sentence& sentence) {
    for (Token& t : sentence.tokens) sort_token(t);
    validate(sentence);
}

void validate(const Sentence& sentence) {
    if (auto v = find_violation(sentence)) {
        std::string where = v->token_index >= 0
                                ? "token " + sentence.tokens[v->token_index].id.str()
                                : "sentence";
        std::string id = sentence.sent_id();
        if (!id.empty()) where += " (sent_id " + id + ")";
        throw InputError(where + ": " + v->reason);
    }
}

std::vector<Sentence> parse_document(std::istream& input) {
    std::vector<Sentence> out;
    Sentence current;
    std::vector<int> token_lines;
    std::string line;
    int line_no = 0;

    auto flush = [&](int at_line) {
        if (current.tokens.empty() && current.comments.empty()) return;
        if (current.tokens.empty())
            throw ParseError(at_line, "comment block without token lines");
        for (Token& t : current.tokens) sort_token(t);
        if (auto v = find_violation(current)) {
            int where = v->token_index >= 0 ? token_lines[v->token_index] : at_line;
            throw ParseError(where, v->reason);
        }
        out.push_back(std::move(current));
        current = Sentence{};
        token_lines.clear();
    };

    while (std::getline(input, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush(line_no);
            continue;
        }
        if (line[0] == '#') {
            if (!current.tokens.empty())
                throw ParseError(line_no, "comment line inside sentence");
            current.comments.push_back(line);
            continue;
        }
        current.tokens.push_back(parse_token_line(line, line_no));
        token_lines.push_back(line_no);
    }
    flush(line_no + 1);
    return out;
}

std::vector<Sentence> parse_document(std::string_view input) {
    std::istringstream stream{std::string(input)};
    return parse_document(stream);
}

std::vector<Sentence> parse_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw InputError("cannot open file: " + path);
    return parse_document(stream);
}

void serialize_document(const std::vector<Sentence>& sentences, std::ostream& out) {
    for (const Sentence& s : sentences) {
        validate(s);
        for (const std::string& c : s.comments) out << c << '\n';
        for (const Token& t : s.tokens) {
            out << t.id.str() << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos
                << '\t' << t.xpos << '\t' << render_feats(t) << '\t'
                << (t.head ? std::to_string(*t.head) : "_") << '\t' << t.deprel << '\t'
                << render_deps(t) << '\t' << t.misc << '\n';
        }
        out << '\n';
    }
}

std::string serialize_to_string(const std::vector<Sentence>& sentences) {
    std::ostringstream out;
    serialize_document(sentences, out);
    return out.str();
}

void serialize_to_file(const std::vector<Sentence>& sentences, const std::string& path) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw InputError("cannot open file for writing: " + path);
    serialize_document(sentences, stream);
}

}  // namespace eud
