// Config parsing strictness plus black-box exit-code and output checks
// against the installed command-line binary (path in EMOMINE_CLI).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "emomine/config.hpp"
#include "emomine/corpus.hpp"
#include "emomine/features.hpp"
#include "emomine/gru.hpp"
#include "emomine/transfer.hpp"

namespace fs = std::filesystem;
using namespace emomine;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int n = 0;
        path = fs::temp_directory_path() /
               ("emomine_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    REQUIRE(out.good());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

const char* cli_path() { return std::getenv("EMOMINE_CLI"); }

// Runs the binary with stdout/stderr captured; returns the exit code.
int run_cli(const std::string& args, const TempDir& dir, std::string* out = nullptr,
            std::string* err = nullptr) {
    const std::string out_path = dir.str("stdout.txt");
    const std::string err_path = dir.str("stderr.txt");
    const std::string command = std::string(cli_path()) + " " + args + " > " + out_path +
                                " 2> " + err_path;
    const int status = std::system(command.c_str());
    if (out != nullptr) *out = read_text(out_path);
    if (err != nullptr) *err = read_text(err_path);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

const char* kMinimalConfig = R"({
  "lexicon": "lex.tsv",
  "inputs": [{"id": "m", "srt": "m.srt", "wav": "m.wav"}]
})";

}  // namespace

TEST_CASE("config parsing fills defaults from a minimal file") {
    const PipelineConfig cfg = parse_config(kMinimalConfig, "mini.json");
    CHECK(cfg.lexicon_path == "lex.tsv");
    CHECK(cfg.out_dir == "out");
    REQUIRE(cfg.inputs.size() == 1);
    CHECK(cfg.inputs[0].source_id == "m");
    CHECK(cfg.inputs[0].srt_path == "m.srt");
    CHECK(cfg.inputs[0].wav_path == "m.wav");
    CHECK(cfg.labeling.positive_threshold == 0.7);
    CHECK(cfg.labeling.negative_threshold == -0.6);
    CHECK(cfg.labeling.neutral_band == 0.05);
    CHECK(cfg.labeling.neutral_sample_count == std::nullopt);
    CHECK(cfg.stft.window_len == 1024);
    CHECK(cfg.stft.hop == 512);
    CHECK(cfg.stft.n_bands == 128);
    CHECK(cfg.stft.max_frames == 515);
    CHECK(cfg.train.learning_rate == 1e-3);
    CHECK(cfg.train.batch_size == 16);
    CHECK(cfg.split.validation_fraction == 0.10);
    CHECK(cfg.sentiment_alpha == 15.0);
    CHECK(cfg.hidden_dim == 32);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config parsing honours every overridable block") {
    const char* text = R"({
  // comments are allowed in config files
  "lexicon": "words.tsv",
  "out_dir": "work",
  "inputs": [
    {"id": "a", "srt": "a.srt", "wav": "a.wav"},
    {"id": "b", "srt": "b.srt", "wav": "b.wav"}
  ],
  "cue_filter": {"max_chars": 80, "min_words": 3},
  "labeling": {
    "positive_threshold": 0.6,
    "negative_threshold": -0.5,
    "neutral_band": 0.02,
    "neutral_sample_count": 40,
    "rng_seed": 5
  },
  "stft": {
    "window": 512, "hop": 256, "fmin_hz": 50.0, "fmax_hz": 4000.0,
    "bands": 64, "max_frames": 200, "log_spaced_bands": false,
    "log_compress": false
  },
  "train": {
    "learning_rate": 0.01, "adam_beta1": 0.8, "adam_beta2": 0.99,
    "adam_eps": 1e-7, "batch_size": 4, "max_epochs": 12, "patience": 3,
    "grad_clip_norm": 2.0, "rng_seed": 9
  },
  "split": {"validation_fraction": 0.2, "rng_seed": 8},
  "sentiment": {"alpha": 10.0},
  "hidden_dim": 16
})";
    const PipelineConfig cfg = parse_config(text, "full.json");
    CHECK(cfg.out_dir == "work");
    CHECK(cfg.inputs.size() == 2);
    CHECK(cfg.cue_filter.max_chars == 80);
    CHECK(cfg.cue_filter.min_words == 3);
    CHECK(cfg.labeling.positive_threshold == 0.6);
    CHECK(cfg.labeling.neutral_sample_count == 40);
    CHECK(cfg.labeling.rng_seed == 5);
    CHECK(cfg.stft.window_len == 512);
    CHECK(cfg.stft.fmin_hz == 50.0);
    CHECK(cfg.stft.log_spaced_bands == false);
    CHECK(cfg.stft.log_compress == false);
    CHECK(cfg.train.adam_beta1 == 0.8);
    CHECK(cfg.train.patience == 3);
    CHECK(cfg.train.rng_seed == 9);
    CHECK(cfg.split.validation_fraction == 0.2);
    CHECK(cfg.split.rng_seed == 8);
    CHECK(cfg.sentiment_alpha == 10.0);
    CHECK(cfg.hidden_dim == 16);
    CHECK_NOTHROW(cfg.validate());

    // Explicit null keeps the "mean of the polar counts" default.
    const PipelineConfig nulled = parse_config(
        R"({"lexicon": "l", "inputs": [{"id": "x", "srt": "s", "wav": "w"}],
            "labeling": {"neutral_sample_count": null}})",
        "null.json");
    CHECK(nulled.labeling.neutral_sample_count == std::nullopt);
}

TEST_CASE("config parsing rejects unknown keys at every level") {
    auto bad = [](const std::string& text) {
        CHECK_THROWS_AS(parse_config(text, "bad.json"), ConfigError);
    };
    bad(R"({"lexicon": "l", "inputs": [], "surprise": 1})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w", "mp3": "x"}]})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "train": {"learning_rate": 0.1, "momentum": 0.9}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "stft": {"window_size": 512}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "labeling": {"positive": 0.7}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "split": {"fraction": 0.1}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "sentiment": {"beta": 1.0}})");
}

TEST_CASE("config parsing rejects malformed structure and values") {
    auto bad = [](const std::string& text) {
        CHECK_THROWS_AS(parse_config(text, "bad.json"), ConfigError);
    };
    bad("not json at all");
    bad(R"(["array", "not", "object"])");
    bad(R"({"lexicon": "l", "inputs": "nope"})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "", "srt": "s", "wav": "w"}]})");
    bad(R"({"lexicon": "l", "inputs": [{"srt": "s", "wav": "w"}]})");  // no id
    bad(R"({"lexicon": "l", "inputs": [
          {"id": "a", "srt": "s", "wav": "w"},
          {"id": "a", "srt": "t", "wav": "v"}]})");  // duplicate id
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "train": {"learning_rate": "fast"}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "train": {"learning_rate": -0.5}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "labeling": {"neutral_band": 0.9}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "split": {"validation_fraction": 0.5}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "stft": {"window": 500}})");
    bad(R"({"lexicon": "l", "inputs": [{"id": "a", "srt": "s", "wav": "w"}],
            "hidden_dim": 0})");

    // The lexicon path is optional at parse time: the build-corpus
    // --lexicon flag can supply it, and the command errors if neither
    // source names one.
    CHECK_NOTHROW(parse_config(R"({"inputs": [{"id": "a", "srt": "s", "wav": "w"}]})",
                               "nolex.json"));
    CHECK(parse_config(R"({"lexicon": "", "inputs": []})", "x.json").lexicon_path.empty());
}

TEST_CASE("config loading reports the file name on failure") {
    TempDir dir;
    CHECK_THROWS_AS(load_config(dir.str("missing.json")), ConfigError);
    write_text(dir.str("broken.json"), "{");
    try {
        load_config(dir.str("broken.json"));
        FAIL("expected a parse failure");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
    }
    write_text(dir.str("good.json"), kMinimalConfig);
    CHECK(load_config(dir.str("good.json")).lexicon_path == "lex.tsv");
}

TEST_CASE("binary: usage errors exit with the config code") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir;
    CHECK(run_cli("", dir) == 2);                  // no subcommand
    CHECK(run_cli("frobnicate", dir) == 2);        // unknown subcommand
    CHECK(run_cli("pretrain", dir) == 2);          // missing --config
    CHECK(run_cli("--help", dir) == 0);

    std::string err;
    write_text(dir.str("cfg.json"), kMinimalConfig);
    const int code = run_cli("finetune --config " + dir.str("cfg.json"), dir, nullptr, &err);
    CHECK(code == 2);  // needs --model or --from-scratch
    CHECK(err.find("error:") != std::string::npos);

    // Both given is just as ambiguous.
    CHECK(run_cli("finetune --config " + dir.str("cfg.json") + " --model x --from-scratch",
                  dir) == 2);
}

TEST_CASE("binary: missing files split config and data exit codes") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir;
    write_text(dir.str("lex.tsv"), "good\t1.9\nbad\t-2.0\n");
    const std::string cfg = "{\n  \"lexicon\": \"" + dir.str("lex.tsv") +
                            "\",\n  \"inputs\": [{\"id\": \"m\", \"srt\": \"" +
                            dir.str("absent.srt") + "\", \"wav\": \"" + dir.str("absent.wav") +
                            "\"}],\n  \"out_dir\": \"" + dir.str("out") + "\"\n}";
    write_text(dir.str("cfg.json"), cfg);

    // The lexicon loads but the sole input is unreadable, so nothing is
    // mined: a data failure.
    std::string err;
    const int code = run_cli("build-corpus --config " + dir.str("cfg.json"), dir, nullptr, &err);
    CHECK(code == 3);
    CHECK(err.find("error:") != std::string::npos);

    // A lexicon path that cannot be opened is a configuration failure.
    const int lex_code = run_cli("build-corpus --config " + dir.str("cfg.json") +
                                     " --lexicon " + dir.str("nowhere.tsv"),
                                 dir, nullptr, &err);
    CHECK(lex_code == 2);
    CHECK(err.find("lexicon") != std::string::npos);
}

TEST_CASE("binary: gradient check passes clean and fails corrupted") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir;
    std::string out;
    CHECK(run_cli("gradcheck --seed 1 --trials 2", dir, &out) == 0);
    CHECK(out.find("fw.in_update") != std::string::npos);
    CHECK(out.find("head.bias") != std::string::npos);
    CHECK(out.find("max_rel_err") != std::string::npos);

    std::string err;
    CHECK(run_cli("gradcheck --seed 1 --corrupt", dir, nullptr, &err) == 1);
    CHECK(err.find("gradient check failed") != std::string::npos);
}

TEST_CASE("binary: eval prints the two metric lines") {
    REQUIRE(cli_path() != nullptr);
    TempDir dir;

    // An untrained model over a tiny cached dataset: the point is the
    // plumbing and output format, not the score.
    Model model;
    model.params = init_params(3, 4, 4, 2);
    model.labels = {"happy", "sad"};
    model.feature_mean = {0.0, 0.0, 0.0, 0.0};
    model.feature_std = {1.0, 1.0, 1.0, 1.0};
    save_model(dir.str("model.emog"), model);

    std::vector<corpus::ManifestRow> rows;
    for (int i = 0; i < 4; ++i) {
        corpus::ManifestRow row;
        row.source_id = "m";
        row.start_ms = i * 100;
        row.end_ms = i * 100 + 50;
        row.label = i % 2 == 0 ? "happy" : "sad";
        row.audio_path = dir.str("seg" + std::to_string(i) + ".wav");
        row.text = "line";
        rows.push_back(row);

        Spectrogram spec;
        spec.values = Mat(3, 4);
        spec.valid_frames = 3;
        for (std::size_t j = 0; j < spec.values.data.size(); ++j) {
            spec.values.data[j] = 0.1 * static_cast<double>(i + 1) * (j % 3 == 0 ? 1.0 : -0.5);
        }
        features::write_feature_file(features::feature_path_for(row.audio_path), spec);
    }
    corpus::write_manifest_rows(dir.str("manifest.csv"), rows);
    write_text(dir.str("cfg.json"), kMinimalConfig);

    std::string out;
    const int code = run_cli("eval --config " + dir.str("cfg.json") + " --model " +
                                 dir.str("model.emog") + " --manifest " +
                                 dir.str("manifest.csv") + " --report " + dir.str("rep.json"),
                             dir, &out);
    CHECK(code == 0);
    REQUIRE(out.rfind("accuracy: ", 0) == 0);
    const std::string first_line = out.substr(0, out.find('\n'));
    CHECK(first_line.size() == std::string("accuracy: 0.000000").size());
    CHECK(out.find("\nmacro_f1: ") != std::string::npos);
    CHECK(fs::exists(dir.str("rep.json")));

    // A model file that is not there is a data error.
    CHECK(run_cli("eval --config " + dir.str("cfg.json") + " --model " + dir.str("ghost.emog") +
                      " --manifest " + dir.str("manifest.csv"),
                  dir) == 3);
}
