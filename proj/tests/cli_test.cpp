#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using testutil::fixture_path;
using testutil::read_file;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "eud-cli-tests";
    fs::create_directories(dir);
    return dir;
}

RunResult run(const std::string& args) {
    fs::path out_file = scratch_dir() / "stdout.txt";
    std::string command =
        std::string(EUD_BIN) + " " + args + " > " + out_file.string() + " 2>/dev/null";
    int status = std::system(command.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, read_file(out_file.string())};
}

std::string tmp(const std::string& name) { return (scratch_dir() / name).string(); }

}  // namespace

TEST_CASE("evaluate of a file against itself prints F1 100.00") {
    RunResult r = run("evaluate " + fixture_path("treebanks/en_sample-ud-dev.conllu") +
                      " " + fixture_path("treebanks/en_sample-ud-dev.conllu"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("F1") != std::string::npos);
    CHECK(r.out.find("100.00") != std::string::npos);
}

TEST_CASE("evaluate --json emits a machine-readable report") {
    RunResult r = run("evaluate --json " + fixture_path("eval/pair1_gold.conllu") + " " +
                      fixture_path("eval/pair1_system.conllu"));
    CHECK(r.exit_code == 0);
    auto report = nlohmann::json::parse(r.out);
    CHECK(report["metric"] == "ELAS");
    CHECK(report["tp"] == 7);
    CHECK(report["fp"] == 2);
    CHECK(report["fn"] == 2);
    RunResult coarse = run("evaluate --json --coarse " + fixture_path("eval/pair1_gold.conllu") +
                           " " + fixture_path("eval/pair1_system.conllu"));
    CHECK(nlohmann::json::parse(coarse.out)["metric"] == "EULAS");
}

TEST_CASE("connect output validates and re-runs byte-identically") {
    std::string out1 = tmp("connected1.conllu");
    std::string out2 = tmp("connected2.conllu");
    CHECK(run("connect --strategy=greedy " + fixture_path("fragmented/frag_system.conllu") +
              " -o " + out1).exit_code == 0);
    CHECK(run("validate " + out1).exit_code == 0);
    CHECK(run("connect --strategy=greedy " + fixture_path("fragmented/frag_system.conllu") +
              " -o " + out2).exit_code == 0);
    CHECK(read_file(out1) == read_file(out2));
    CHECK(read_file(out1) != read_file(fixture_path("fragmented/frag_system.conllu")));
}

TEST_CASE("validate rejects every malformed fixture") {
    for (const auto& entry : fs::directory_iterator(fixture_path("malformed"))) {
        CAPTURE(entry.path().string());
        RunResult r = run("validate " + entry.path().string());
        CHECK(r.exit_code == 2);
        CHECK(r.out.find("INVALID") != std::string::npos);
    }
}

TEST_CASE("validate accepts the bundled treebanks") {
    CHECK(run("validate " + fixture_path("treebanks/en_sample-ud-dev.conllu")).exit_code == 0);
    CHECK(run("validate " + fixture_path("treebanks/xx_sample-ud-dev.conllu")).exit_code == 0);
}

TEST_CASE("decode reproduces the figure example end to end") {
    std::string out = tmp("fig1_decoded.conllu");
    RunResult r = run("decode --probs " + fixture_path("probs/fig1_probs.jsonl") + " " +
                      fixture_path("probs/fig1_basic.conllu") + " -o " + out);
    CHECK(r.exit_code == 0);
    CHECK(read_file(out) == read_file(fixture_path("probs/fig1_gold.conllu")));
}

TEST_CASE("pipeline equals the manually composed stages") {
    std::string decoded = tmp("pipe_decoded.conllu");
    std::string connected = tmp("pipe_connected.conllu");
    std::string direct = tmp("pipe_direct.conllu");
    CHECK(run("decode --probs " + fixture_path("probs/pipe_probs.jsonl") + " " +
              fixture_path("probs/pipe_template.conllu") + " -o " + decoded).exit_code == 0);
    CHECK(run("connect --strategy=greedy " + decoded + " -o " + connected).exit_code == 0);
    RunResult composed = run("evaluate " + fixture_path("probs/pipe_gold.conllu") + " " + connected);
    RunResult pipeline = run("pipeline " + fixture_path("probs/pipe_template.conllu") +
                             " --probs " + fixture_path("probs/pipe_probs.jsonl") +
                             " --gold " + fixture_path("probs/pipe_gold.conllu") +
                             " --strategy greedy -o " + direct);
    CHECK(pipeline.exit_code == 0);
    CHECK(pipeline.out == composed.out);
    CHECK(read_file(direct) == read_file(connected));
}

TEST_CASE("pipeline in enhancer mode selects rules against the gold file") {
    RunResult r = run("pipeline " + fixture_path("treebanks/en_sample-ud-dev.conllu") +
                      " --gold " + fixture_path("treebanks/en_sample-ud-dev.conllu") +
                      " --json");
    CHECK(r.exit_code == 0);
    auto report = nlohmann::json::parse(r.out);
    CHECK(report["f1"].get<double>() > 85.0);
}

TEST_CASE("enhance with an explicit rule list") {
    std::string out = tmp("enhanced.conllu");
    RunResult r = run("enhance --rules=case_lemma,conj_lemma " +
                      fixture_path("treebanks/en_sample-ud-dev.conllu") + " -o " + out);
    CHECK(r.exit_code == 0);
    CHECK(read_file(out).find("1:nmod:of") != std::string::npos);
    CHECK(run("enhance --rules=case_lemma,case_feat " +
              fixture_path("treebanks/en_sample-ud-dev.conllu") + " -o " + tmp("x.conllu"))
              .exit_code == 2);
}

TEST_CASE("ensemble majority voting over member files") {
    std::string out = tmp("combined.conllu");
    RunResult r = run("ensemble " + fixture_path("ensemble/ens_m0.conllu") + " " +
                      fixture_path("ensemble/ens_m1.conllu") + " " +
                      fixture_path("ensemble/ens_m2.conllu") + " -o " + out);
    CHECK(r.exit_code == 0);
    CHECK(read_file(out) == read_file(fixture_path("ensemble/ens_expected.conllu")));
    // Heavily weighting the first member reproduces its trees.
    RunResult weighted = run("ensemble " + fixture_path("ensemble/ens_m0.conllu") + " " +
                             fixture_path("ensemble/ens_m1.conllu") + " " +
                             fixture_path("ensemble/ens_m2.conllu") +
                             " --weights 5,1,1 -o " + out);
    CHECK(weighted.exit_code == 0);
    CHECK(read_file(out) == read_file(fixture_path("ensemble/ens_m0.conllu")));
}

TEST_CASE("exit codes distinguish usage, data and success") {
    CHECK(run("no-such-command").exit_code == 1);
    CHECK(run("connect --strategy=bogus -").exit_code == 1);
    CHECK(run("evaluate " + fixture_path("eval/pair1_gold.conllu") + " /no/such/file")
              .exit_code == 2);
    CHECK(run("evaluate " + fixture_path("eval/pair1_gold.conllu") + " " +
              fixture_path("malformed/bad_columns.conllu")).exit_code == 2);
    CHECK(run("decode --probs " + fixture_path("probs/pipe_probs.jsonl") + " " +
              fixture_path("probs/pipe_template.conllu") + " --threshold 1.5")
              .exit_code == 1);
    CHECK(run("enhance --rules=auto " +
              fixture_path("treebanks/en_sample-ud-dev.conllu")).exit_code == 1);
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("output path must differ from input paths") {
    std::string input = tmp("inout.conllu");
    std::ofstream(input) << read_file(fixture_path("treebanks/en_sample-ud-dev.conllu"));
    RunResult r = run("connect " + input + " -o " + input);
    CHECK(r.exit_code == 2);
    // Input is untouched.
    CHECK(read_file(input) == read_file(fixture_path("treebanks/en_sample-ud-dev.conllu")));
}

TEST_CASE("stdin and stdout defaults compose with shell pipes") {
    RunResult r = run("connect --strategy=naive < " +
                      fixture_path("fragmented/frag_system.conllu"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0:root") != std::string::npos);
}
