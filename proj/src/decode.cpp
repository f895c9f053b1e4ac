#include "eud/decode.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace eud {

void EdgeProbabilities::validate() const {
    if (n_words < 1 || n_empty < 0)
        throw InputError("probability record " + sent_id + ": invalid node counts");
    std::size_t cells = static_cast<std::size_t>(n_nodes()) * n_nodes();
    if (edge_prob.size() != cells)
        throw InputError("probability record " + sent_id + ": edge_prob has " +
                         std::to_string(edge_prob.size()) + " cells, expected " +
                         std::to_string(cells));
    if (best_label.size() != cells)
        throw InputError("probability record " + sent_id + ": best_label has " +
                         std::to_string(best_label.size()) + " cells, expected " +
                         std::to_string(cells));
    for (double p : edge_prob)
        if (!(p >= 0.0 && p <= 1.0))
            throw InputError("probability record " + sent_id + ": probability " +
                             std::to_string(p) + " outside [0,1]");
    for (int l : best_label)
        if (l < 0 || l >= static_cast<int>(label_vocab.size()))
            throw InputError("probability record " + sent_id + ": label index " +
                             std::to_string(l) + " outside vocabulary");
    for (int head = 0; head < n_nodes(); ++head)
        if (prob(0, head) != 0.0)
            throw InputError("probability record " + sent_id +
                             ": ROOT row of edge_prob must be all zeros");
}

EnhancedGraph decode(const EdgeProbabilities& p, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("decoding threshold must lie in (0,1)");
    p.validate();
    EnhancedGraph g(p.n_words, p.n_empty);
    int n = p.n_nodes();
    for (int dep = 1; dep < n; ++dep) {
        bool any = false;
        for (int head = 0; head < n; ++head) {
            if (head == dep) continue;
            if (p.prob(dep, head) > threshold) {
                g.add_edge(head, dep, p.label(dep, head));
                any = true;
            }
        }
        if (any) continue;
        // Fallback: the single most probable head, smallest index on ties.
        int best = -1;
        double best_prob = -1.0;
        for (int head = 0; head < n; ++head) {
            if (head == dep) continue;
            if (p.prob(dep, head) > best_prob) {
                best_prob = p.prob(dep, head);
                best = head;
            }
        }
        g.add_edge(best, dep, p.label(dep, best));
    }
    return g;
}

HeadFeature head_feature(int dependent, int head) {
    if (dependent < 1) throw std::invalid_argument("dependent index must be positive");
    if (head < 0) throw std::invalid_argument("head index must be non-negative");
    if (dependent == head)
        throw std::invalid_argument("head and dependent indices must differ");
    int distance = head - dependent;  // negative: head to the left
    HeadFeature f;
    f.direction = distance < 0 ? Direction::Left : Direction::Right;
    int d = std::abs(distance);
    if (d <= 4)
        f.bucket = DistanceBucket::Short;
    else if (d <= 9)
        f.bucket = DistanceBucket::Medium;
    else if (d <= 14)
        f.bucket = DistanceBucket::Far;
    else
        f.bucket = DistanceBucket::LongRange;
    return f;
}

std::vector<EdgeProbabilities> load_probabilities(std::istream& input) {
    std::vector<EdgeProbabilities> out;
    std::string line;
    int line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("malformed record: ") + e.what());
        }
        EdgeProbabilities p;
        try {
            p.sent_id = record.at("sent_id").get<std::string>();
            p.n_words = record.at("n_words").get<int>();
            p.n_empty = record.at("n_empty").get<int>();
            p.label_vocab = record.at("labels").get<std::vector<std::string>>();
            p.edge_prob = record.at("edge_prob").get<std::vector<double>>();
            p.best_label = record.at("best_label").get<std::vector<int>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("malformed record: ") + e.what());
        }
        try {
            p.validate();
        } catch (const InputError& e) {
            throw ParseError(line_no, e.what());
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<EdgeProbabilities> load_probabilities_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw InputError("cannot open file: " + path);
    return load_probabilities(stream);
}

void save_probabilities(const std::vector<EdgeProbabilities>& records, std::ostream& out) {
    for (const EdgeProbabilities& p : records) {
        nlohmann::ordered_json record;
        record["sent_id"] = p.sent_id;
        record["n_words"] = p.n_words;
        record["n_empty"] = p.n_empty;
        record["labels"] = p.label_vocab;
        record["edge_prob"] = p.edge_prob;
        record["best_label"] = p.best_label;
        out << record.dump() << '\n';
    }
}

}  // namespace eud
