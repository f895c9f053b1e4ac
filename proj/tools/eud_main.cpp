// Command-line front end: every pipeline stage as a subcommand over files or
// stdin/stdout. Exit codes: 0 success, 1 usage, 2 input format error,
// 3 internal invariant violation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eud/connect.hpp"
#include "eud/decode.hpp"
#include "eud/enhancer.hpp"
#include "eud/ensemble.hpp"
#include "eud/eval.hpp"

namespace {

using eud::Sentence;

std::vector<Sentence> read_sentences(const std::string& path) {
    if (path == "-") return eud::parse_document(std::cin);
    return eud::parse_file(path);
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw eud::InputError("cannot open file for writing: " + path);
    out << text;
}

void check_output_distinct(const std::string& output, const std::vector<std::string>& inputs) {
    if (output == "-") return;
    namespace fs = std::filesystem;
    fs::path out = fs::weakly_canonical(output);
    for (const std::string& in : inputs) {
        if (in == "-") continue;
        if (fs::exists(in) && fs::weakly_canonical(in) == out)
            throw eud::InputError("output path must differ from input path: " + in);
    }
}

// Stage failures carry the stage name so pipeline errors are attributable.
template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const eud::InputError& e) {
        throw eud::InputError(std::string(name) + ": " + e.what());
    }
}

eud::RuleSet parse_rules(const std::string& spec) {
    eud::RuleSet rules;
    if (spec == "none" || spec.empty()) return rules;
    std::stringstream stream(spec);
    std::string item;
    while (std::getline(stream, item, ',')) {
        auto rule = eud::rule_from_name(item);
        if (!rule)
            throw eud::InputError("unknown rule '" + item +
                                  "' (expected case_lemma, case_feat, conj_lemma, relcl_ref)");
        rules.enable(*rule);
    }
    return rules;
}

eud::Strategy parse_strategy(const std::string& name) {
    if (name == "naive") return eud::Strategy::Naive;
    if (name == "greedy") return eud::Strategy::Greedy;
    if (name == "oracle") return eud::Strategy::Oracle;
    throw eud::InputError("unknown strategy '" + name + "'");
}

std::string format_report(const eud::ElasReport& r, bool json) {
    const char* metric = r.mode == eud::LabelMode::Coarse ? "EULAS" : "ELAS";
    if (json) {
        nlohmann::ordered_json out;
        out["metric"] = metric;
        out["mode"] = r.mode == eud::LabelMode::Coarse ? "coarse" : "full";
        out["tp"] = r.tp;
        out["fp"] = r.fp;
        out["fn"] = r.fn;
        out["precision"] = r.precision();
        out["recall"] = r.recall();
        out["f1"] = r.f1();
        return out.dump() + "\n";
    }
    char buffer[256];
    std::string out;
    std::snprintf(buffer, sizeof(buffer), "%s precision: %.2f (%lld/%lld)\n", metric,
                  r.precision(), r.tp, r.tp + r.fp);
    out += buffer;
    std::snprintf(buffer, sizeof(buffer), "%s recall:    %.2f (%lld/%lld)\n", metric,
                  r.recall(), r.tp, r.tp + r.fn);
    out += buffer;
    std::snprintf(buffer, sizeof(buffer), "%s F1:        %.2f\n", metric, r.f1());
    out += buffer;
    return out;
}

std::vector<Sentence> decode_document(const std::vector<Sentence>& templates,
                                      const std::vector<eud::EdgeProbabilities>& probs,
                                      double threshold) {
    if (templates.size() != probs.size())
        throw eud::InputError("template has " + std::to_string(templates.size()) +
                              " sentences but probabilities file has " +
                              std::to_string(probs.size()) + " records");
    std::vector<Sentence> out;
    out.reserve(templates.size());
    for (std::size_t i = 0; i < templates.size(); ++i) {
        const Sentence& tmpl = templates[i];
        const eud::EdgeProbabilities& p = probs[i];
        if (p.n_words != tmpl.word_count() || p.n_empty != tmpl.empty_count())
            throw eud::InputError("record " + std::to_string(i + 1) + " (" + p.sent_id +
                                  "): node counts do not match the template sentence");
        out.push_back(eud::to_sentence(eud::decode(p, threshold), tmpl));
    }
    return out;
}

std::vector<Sentence> connect_document(const std::vector<Sentence>& sentences,
                                       eud::Strategy strategy) {
    std::vector<Sentence> out;
    out.reserve(sentences.size());
    for (const Sentence& s : sentences) {
        eud::RepairOutcome repair = eud::connect_with(eud::from_sentence(s), strategy);
        out.push_back(eud::to_sentence(repair.repaired, s));
    }
    return out;
}

struct EnhanceOutcome {
    std::vector<Sentence> sentences;
    std::string info;  // rule-selection summary for stderr
};

EnhanceOutcome enhance_document_cli(const std::vector<Sentence>& input,
                                    const std::string& rules_spec,
                                    const std::string& gold_path) {
    if (rules_spec == "auto") {
        if (gold_path.empty())
            throw eud::InputError("--rules=auto requires --gold");
        auto gold = stage("read gold", [&] { return read_sentences(gold_path); });
        eud::SubsetSearchResult result = eud::best_rule_subset(gold, input);
        char buffer[160];
        std::snprintf(buffer, sizeof(buffer), "selected rules: %s (ELAS F1 %.2f)\n",
                      result.rules.str().c_str(), result.report.f1());
        return {eud::enhance_document(input, result.rules), buffer};
    }
    return {eud::enhance_document(input, parse_rules(rules_spec)), ""};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"enhanced-dependency toolkit"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    std::string gold_path;
    std::string probs_path;
    std::string rules_spec = "case_lemma,conj_lemma,relcl_ref";
    std::string strategy_name = "greedy";
    std::string weights_spec;
    double threshold = 0.5;
    bool coarse = false;
    bool json = false;
    std::vector<std::string> member_paths;

    CLI::App* enhance = app.add_subcommand(
        "enhance", "copy basic trees into DEPS and apply heuristic rules");
    enhance->add_option("input", input, "basic-tree CoNLL-U file (default stdin)");
    enhance->add_option("--rules", rules_spec,
                        "comma list of rules, 'none', or 'auto' (search against --gold)");
    enhance->add_option("--gold", gold_path, "gold CoNLL-U file for --rules=auto");
    enhance->add_option("-o,--output", output, "output path (default stdout)");

    CLI::App* decode = app.add_subcommand(
        "decode", "decode enhanced graphs from an edge-probability file");
    decode->add_option("input", input, "template CoNLL-U file (default stdin)");
    decode->add_option("--probs", probs_path, "JSON-lines probability file")->required();
    decode->add_option("--threshold", threshold, "edge prediction threshold (default 0.5)");
    decode->add_option("-o,--output", output, "output path (default stdout)");

    CLI::App* connect = app.add_subcommand(
        "connect", "make every node reachable from the notional ROOT");
    connect->add_option("input", input, "CoNLL-U file (default stdin)");
    connect->add_option("--strategy", strategy_name, "naive, greedy or oracle")
        ->check(CLI::IsMember({"naive", "greedy", "oracle"}));
    connect->add_option("-o,--output", output, "output path (default stdout)");

    CLI::App* ensemble = app.add_subcommand(
        "ensemble", "combine basic-tree predictions by weighted head voting");
    ensemble->add_option("members", member_paths, "member CoNLL-U files")
        ->expected(2, -1)
        ->required();
    ensemble->add_option("--weights", weights_spec, "comma list of positive member weights");
    ensemble->add_option("-o,--output", output, "output path (default stdout)");

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "score system DEPS against gold (ELAS / EULAS)");
    evaluate->add_option("gold", gold_path, "gold CoNLL-U file")->required();
    evaluate->add_option("system", input, "system CoNLL-U file")->required();
    evaluate->add_flag("--coarse", coarse, "truncate labels at the first ':'");
    evaluate->add_flag("--json", json, "machine-readable report");

    CLI::App* validate = app.add_subcommand(
        "validate", "check CoNLL-U structure and full reachability");
    validate->add_option("input", input, "CoNLL-U file (default stdin)");

    CLI::App* pipeline = app.add_subcommand(
        "pipeline", "enhance or decode, connect, then evaluate against gold");
    pipeline->add_option("input", input, "basic-tree or template CoNLL-U file (default stdin)");
    pipeline->add_option("--gold", gold_path, "gold CoNLL-U file")->required();
    pipeline->add_option("--probs", probs_path,
                         "JSON-lines probability file (decode instead of enhance)");
    pipeline->add_option("--rules", rules_spec, "enhancer rules (default auto)");
    pipeline->add_option("--threshold", threshold, "edge prediction threshold");
    pipeline->add_option("--strategy", strategy_name, "connector strategy")
        ->check(CLI::IsMember({"naive", "greedy", "oracle"}));
    pipeline->add_flag("--coarse", coarse, "evaluate with truncated labels");
    pipeline->add_flag("--json", json, "machine-readable report");
    pipeline->add_option("-o,--output", output, "write the connected output here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*decode || *pipeline) {
            if (!(threshold > 0.0 && threshold < 1.0)) {
                std::cerr << "eud: --threshold must lie strictly between 0 and 1\n";
                return 1;
            }
        }
        if (*enhance && rules_spec == "auto" && gold_path.empty()) {
            std::cerr << "eud: --rules=auto requires --gold\n";
            return 1;
        }

        if (*enhance) {
            check_output_distinct(output, {input, gold_path});
            auto sentences = stage("read input", [&] { return read_sentences(input); });
            EnhanceOutcome result =
                stage("enhance", [&] { return enhance_document_cli(sentences, rules_spec, gold_path); });
            if (!result.info.empty()) std::cerr << result.info;
            write_text(output, eud::serialize_to_string(result.sentences));
        } else if (*decode) {
            check_output_distinct(output, {input, probs_path});
            auto templates = stage("read input", [&] { return read_sentences(input); });
            auto probs =
                stage("read probabilities", [&] { return eud::load_probabilities_file(probs_path); });
            auto decoded =
                stage("decode", [&] { return decode_document(templates, probs, threshold); });
            write_text(output, eud::serialize_to_string(decoded));
        } else if (*connect) {
            check_output_distinct(output, {input});
            auto sentences = stage("read input", [&] { return read_sentences(input); });
            auto connected = stage("connect", [&] {
                return connect_document(sentences, parse_strategy(strategy_name));
            });
            write_text(output, eud::serialize_to_string(connected));
        } else if (*ensemble) {
            check_output_distinct(output, member_paths);
            eud::EnsembleInput in;
            for (const std::string& path : member_paths)
                in.members.push_back(stage("read member", [&] { return read_sentences(path); }));
            if (!weights_spec.empty()) {
                std::stringstream stream(weights_spec);
                std::string item;
                while (std::getline(stream, item, ',')) {
                    try {
                        in.weights.push_back(std::stod(item));
                    } catch (const std::exception&) {
                        throw eud::InputError("malformed weight '" + item + "'");
                    }
                }
            }
            auto combined = stage("ensemble", [&] { return eud::combine(in); });
            write_text(output, eud::serialize_to_string(combined));
        } else if (*evaluate) {
            auto gold = stage("read gold", [&] { return read_sentences(gold_path); });
            auto system = stage("read system", [&] { return read_sentences(input); });
            eud::ElasReport report = stage("evaluate", [&] {
                return eud::score(gold, system,
                                  coarse ? eud::LabelMode::Coarse : eud::LabelMode::Full);
            });
            std::cout << format_report(report, json);
        } else if (*validate) {
            std::vector<Sentence> sentences;
            try {
                sentences = read_sentences(input);
                for (std::size_t i = 0; i < sentences.size(); ++i) {
                    auto unreachable = eud::reachability(eud::from_sentence(sentences[i])).unreachable;
                    if (!unreachable.empty()) {
                        std::string nodes;
                        for (int u : unreachable) nodes += " " + std::to_string(u);
                        std::string id = sentences[i].sent_id();
                        throw eud::InputError(
                            "sentence " + std::to_string(i + 1) +
                            (id.empty() ? "" : " (sent_id " + id + ")") +
                            ": nodes unreachable from ROOT:" + nodes);
                    }
                }
            } catch (const eud::InputError& e) {
                std::cout << "INVALID: " << e.what() << "\n";
                return 2;
            }
            std::cout << "OK: " << sentences.size() << " sentences\n";
        } else if (*pipeline) {
            check_output_distinct(output, {input, gold_path, probs_path});
            auto sentences = stage("read input", [&] { return read_sentences(input); });
            auto gold = stage("read gold", [&] { return read_sentences(gold_path); });
            std::vector<Sentence> graphs;
            if (!probs_path.empty()) {
                auto probs = stage("read probabilities",
                                   [&] { return eud::load_probabilities_file(probs_path); });
                graphs = stage("decode",
                               [&] { return decode_document(sentences, probs, threshold); });
            } else {
                std::string spec = pipeline->count("--rules") > 0 ? rules_spec : "auto";
                EnhanceOutcome result = stage("enhance", [&] {
                    return enhance_document_cli(sentences, spec, gold_path);
                });
                if (!result.info.empty()) std::cerr << result.info;
                graphs = std::move(result.sentences);
            }
            auto connected = stage("connect", [&] {
                return connect_document(graphs, parse_strategy(strategy_name));
            });
            eud::ElasReport report = stage("evaluate", [&] {
                return eud::score(gold, connected,
                                  coarse ? eud::LabelMode::Coarse : eud::LabelMode::Full);
            });
            if (output != "-") write_text(output, eud::serialize_to_string(connected));
            std::cout << format_report(report, json);
        }
        return 0;
    } catch (const eud::InputError& e) {
        std::cerr << "eud: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "eud: internal error: " << e.what() << "\n";
        return 3;
    }
}
