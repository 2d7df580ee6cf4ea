// Command-line front end for the emotional speech mining pipeline:
// mine weak-labeled segments from subtitle/audio pairs, cache spectral
// features, pretrain / fine-tune / evaluate the recurrent classifier.
//
// Exit codes: 0 success, 1 failed verification (gradcheck), 2 config or
// usage error, 3 data error, 4 numerical failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "emomine/config.hpp"
#include "emomine/corpus.hpp"
#include "emomine/features.hpp"
#include "emomine/gru.hpp"
#include "emomine/metrics.hpp"
#include "emomine/rng.hpp"
#include "emomine/transfer.hpp"

namespace fs = std::filesystem;
using namespace emomine;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

void print_warnings(const std::vector<Diag>& warnings) {
    for (const Diag& w : warnings) {
        std::cerr << "warning: " << w.source;
        if (w.ordinal > 0) std::cerr << ":" << w.ordinal;
        std::cerr << ": " << w.reason << "\n";
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return text;
}

sentiment::SentimentLexicon load_lexicon_file(const std::string& path) {
    if (path.empty())
        throw ConfigError("config has no lexicon path (key: lexicon)");
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error&) {
        throw ConfigError("cannot open lexicon file: " + path);
    }
    auto loaded = sentiment::load_lexicon(text, path);
    print_warnings(loaded.warnings);
    return std::move(loaded.lexicon);
}

std::string default_manifest(const PipelineConfig& cfg) {
    return (fs::path(cfg.out_dir) / "manifest.csv").string();
}

// Common per-command flags: the config file plus the overrides that make
// sense for every pipeline stage.
struct CommonArgs {
    std::string config_path;
    std::string out_dir_override;
    std::optional<std::uint64_t> seed_override;

    PipelineConfig load() const {
        PipelineConfig cfg = load_config(config_path);
        if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
        if (seed_override) {
            cfg.train.rng_seed = *seed_override;
            cfg.labeling.rng_seed = *seed_override;
            cfg.split.rng_seed = *seed_override;
        }
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "pipeline config file")
        ->required();
    cmd->add_option("--out-dir", args.out_dir_override,
                    "override config out_dir");
    cmd->add_option("--seed", args.seed_override,
                    "override every rng seed in the config");
}

struct TrainOverrides {
    std::optional<double> learning_rate;
    std::optional<std::size_t> batch_size;
    std::optional<std::size_t> max_epochs;
    std::optional<std::size_t> patience;
    std::optional<std::size_t> hidden_dim;
    std::optional<double> validation_fraction;

    void apply(PipelineConfig& cfg) const {
        if (learning_rate) cfg.train.learning_rate = *learning_rate;
        if (batch_size) cfg.train.batch_size = *batch_size;
        if (max_epochs) cfg.train.max_epochs = *max_epochs;
        if (patience) cfg.train.patience = *patience;
        if (hidden_dim) cfg.hidden_dim = *hidden_dim;
        if (validation_fraction)
            cfg.split.validation_fraction = *validation_fraction;
        cfg.validate();
    }
};

void add_train_overrides(CLI::App* cmd, TrainOverrides& o) {
    cmd->add_option("--learning-rate", o.learning_rate,
                    "override train.learning_rate");
    cmd->add_option("--batch-size", o.batch_size, "override train.batch_size");
    cmd->add_option("--max-epochs", o.max_epochs, "override train.max_epochs");
    cmd->add_option("--patience", o.patience, "override train.patience");
    cmd->add_option("--hidden-dim", o.hidden_dim, "override hidden state size");
    cmd->add_option("--validation-fraction", o.validation_fraction,
                    "override split.validation_fraction");
}

int cmd_build_corpus(const CommonArgs& common, const std::string& lexicon_flag,
                     std::optional<std::uint64_t> neutral_count) {
    PipelineConfig cfg = common.load();
    if (!lexicon_flag.empty()) cfg.lexicon_path = lexicon_flag;
    if (neutral_count) cfg.labeling.neutral_sample_count = neutral_count;
    if (cfg.inputs.empty())
        throw ConfigError("config has no inputs (key: inputs)");

    const auto lexicon = load_lexicon_file(cfg.lexicon_path);

    corpus::BuildOptions opts;
    opts.cue_filter = cfg.cue_filter;
    opts.labeling = cfg.labeling;
    opts.sentiment_alpha = cfg.sentiment_alpha;
    opts.out_dir = cfg.out_dir;
    const corpus::BuildSummary summary =
        corpus::build_corpus(cfg.inputs, lexicon, opts);

    print_warnings(summary.warnings);
    std::cout << "positive: " << summary.positive_count << "\n"
              << "negative: " << summary.negative_count << "\n"
              << "neutral: " << summary.neutral_count << "\n"
              << "manifest: " << summary.manifest_path << "\n";
    return kExitOk;
}

int cmd_featurize(const CommonArgs& common, const std::string& manifest_flag) {
    const PipelineConfig cfg = common.load();
    const std::string manifest_path =
        manifest_flag.empty() ? default_manifest(cfg) : manifest_flag;
    const auto rows = corpus::read_manifest(manifest_path);
    if (rows.empty()) throw EmptyCorpusError("manifest has no rows");

    // Validate every WAV before writing anything so a corrupted file
    // cannot leave the cache half-updated.
    std::vector<std::string> offenders;
    for (const auto& row : rows) {
        try {
            const AudioBuffer audio = read_wav_file(row.audio_path);
            cfg.stft.validate(static_cast<double>(audio.sample_rate_hz));
        } catch (const Error& e) {
            offenders.push_back(row.audio_path + ": " + e.what());
        }
    }
    if (!offenders.empty()) {
        for (const std::string& o : offenders)
            std::cerr << "error: unreadable audio: " << o << "\n";
        return kExitData;
    }

    std::size_t computed = 0, cached = 0;
    for (const auto& row : rows) {
        const std::string feat_path =
            features::feature_path_for(row.audio_path);
        std::error_code ec;
        const auto feat_time = fs::last_write_time(feat_path, ec);
        if (!ec) {
            const auto wav_time = fs::last_write_time(row.audio_path);
            if (feat_time >= wav_time) {
                ++cached;
                continue;
            }
        }
        const AudioBuffer audio = read_wav_file(row.audio_path);
        const features::Spectrogram spec = features::stft_bands(audio, cfg.stft);
        features::write_feature_file(feat_path, spec);
        ++computed;
    }
    std::cout << computed << " computed, " << cached << " cached\n";
    return kExitOk;
}

int cmd_pretrain(const CommonArgs& common, const TrainOverrides& overrides,
                 const std::string& manifest_flag,
                 const std::string& model_out_flag) {
    PipelineConfig cfg = common.load();
    overrides.apply(cfg);
    const std::string manifest_path =
        manifest_flag.empty() ? default_manifest(cfg) : manifest_flag;
    const Dataset data = load_dataset(manifest_path, LabelSpace::pretrain());

    const TrainRun run = pretrain(data, cfg.train, cfg.split, cfg.hidden_dim);
    const fs::path model_path =
        model_out_flag.empty() ? fs::path(cfg.out_dir) / "pretrained.emog"
                               : fs::path(model_out_flag);
    fs::create_directories(model_path.parent_path().empty()
                               ? fs::path(".")
                               : model_path.parent_path());
    save_model(model_path, run.model);
    const fs::path report =
        write_report(cfg.out_dir, "pretrain", cfg.train, cfg.split, run,
                     nullptr);

    std::cout << "best_epoch: " << run.best_epoch << "\n"
              << "best_val_loss: " << run.best_val_loss << "\n"
              << "best_val_accuracy: " << run.best_val_accuracy() << "\n"
              << "model: " << model_path.string() << "\n"
              << "report: " << report.string() << "\n";
    return kExitOk;
}

int cmd_finetune(const CommonArgs& common, const TrainOverrides& overrides,
                 const std::string& manifest_flag,
                 const std::string& model_flag, bool from_scratch,
                 const std::string& model_out_flag) {
    if (model_flag.empty() && !from_scratch)
        throw ConfigError(
            "finetune needs --model <pretrained.emog> or --from-scratch");
    if (!model_flag.empty() && from_scratch)
        throw ConfigError("--model and --from-scratch are mutually exclusive");

    PipelineConfig cfg = common.load();
    overrides.apply(cfg);
    if (manifest_flag.empty())
        throw ConfigError("finetune needs --manifest with emotion labels");
    const Dataset data = load_dataset(manifest_flag, LabelSpace::finetune());

    TrainRun run;
    std::string task;
    if (from_scratch) {
        task = "scratch";
        run = train_from_scratch(data, cfg.train, cfg.split, cfg.hidden_dim);
    } else {
        task = "finetune";
        const Model base = load_model(model_flag);
        const Model adapted =
            replace_head(base, LabelSpace::finetune(), cfg.train.rng_seed);
        run = finetune(adapted, data, cfg.train, cfg.split);
    }

    const fs::path model_path =
        model_out_flag.empty() ? fs::path(cfg.out_dir) / "finetuned.emog"
                               : fs::path(model_out_flag);
    fs::create_directories(model_path.parent_path().empty()
                               ? fs::path(".")
                               : model_path.parent_path());
    save_model(model_path, run.model);
    const fs::path report =
        write_report(cfg.out_dir, task, cfg.train, cfg.split, run, nullptr);

    std::cout << "best_epoch: " << run.best_epoch << "\n"
              << "best_val_loss: " << run.best_val_loss << "\n"
              << "best_val_accuracy: " << run.best_val_accuracy() << "\n"
              << "model: " << model_path.string() << "\n"
              << "report: " << report.string() << "\n";
    return kExitOk;
}

nlohmann::json metrics_json(const MetricsReport& m) {
    nlohmann::json j;
    j["accuracy"] = m.accuracy;
    j["macro_f1"] = m.macro_f1;
    j["precision"] = m.precision;
    j["recall"] = m.recall;
    j["f1"] = m.f1;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t t = 0; t < m.class_count; ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t p = 0; p < m.class_count; ++p)
            row.push_back(m.confusion(t, p));
        rows.push_back(row);
    }
    j["confusion"] = rows;
    return j;
}

int cmd_eval(const CommonArgs& common, const std::string& model_flag,
             const std::string& manifest_flag,
             const std::string& report_flag) {
    const PipelineConfig cfg = common.load();
    const Model model = load_model(model_flag);
    const std::string manifest_path =
        manifest_flag.empty() ? default_manifest(cfg) : manifest_flag;
    const Dataset data = load_dataset(manifest_path, LabelSpace{model.labels});
    const MetricsReport rep = evaluate(model, data);

    char line[64];
    std::snprintf(line, sizeof line, "accuracy: %.6f\n", rep.accuracy);
    std::cout << line;
    std::snprintf(line, sizeof line, "macro_f1: %.6f\n", rep.macro_f1);
    std::cout << line;

    if (!report_flag.empty()) {
        std::ofstream out(report_flag, std::ios::trunc);
        if (!out) throw Error("cannot write report: " + report_flag);
        out << metrics_json(rep).dump(2) << "\n";
    }
    return kExitOk;
}

int cmd_binary(const CommonArgs& common, const TrainOverrides& overrides,
               const std::string& positive, const std::string& negative,
               const std::string& train_flag, const std::string& eval_flag,
               const std::string& mined_flag) {
    PipelineConfig cfg = common.load();
    overrides.apply(cfg);

    const LabelSpace task_space{{positive, negative}};
    const Dataset target_train = load_dataset(train_flag, task_space);
    const Dataset target_eval = load_dataset(eval_flag, task_space);
    const std::string mined_path =
        mined_flag.empty() ? default_manifest(cfg) : mined_flag;
    const Dataset mined = load_dataset(mined_path, LabelSpace::pretrain());

    BinaryTaskConfig task;
    task.positive_class = positive;
    task.negative_class = negative;
    task.train = cfg.train;
    task.split = cfg.split;
    task.hidden_dim = cfg.hidden_dim;
    const BinaryTaskResult result =
        run_binary_task(target_train, target_eval, mined, task);

    const std::string stem = "binary_" + positive + "_vs_" + negative;
    write_report(cfg.out_dir, stem + "_baseline", cfg.train, cfg.split,
                 result.baseline_run, &result.baseline);
    write_report(cfg.out_dir, stem + "_augmented", cfg.train, cfg.split,
                 result.augmented_run, &result.augmented);

    char line[64];
    std::snprintf(line, sizeof line, "baseline_accuracy: %.6f\n",
                  result.baseline.accuracy);
    std::cout << line;
    std::snprintf(line, sizeof line, "augmented_accuracy: %.6f\n",
                  result.augmented.accuracy);
    std::cout << line;
    return kExitOk;
}

// Finite-difference verification of the analytic gradients on a small
// random instance. Central differences, step 1e-4; relative error
// |ga - gfd| / max(1e-6, |ga| + |gfd|) must stay below 1e-4 everywhere.
int cmd_gradcheck(std::uint64_t seed, std::size_t trials, bool corrupt) {
    constexpr std::size_t kBands = 5, kHidden = 4, kClasses = 3, kFrames = 7;
    constexpr double kStep = 1e-4;
    constexpr double kTolerance = 1e-4;

    const auto& names = GruParams::tensor_names();
    std::vector<double> worst(names.size(), 0.0);

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = seed + trial;
        GruParams params =
            init_params(trial_seed, kBands, kHidden, kClasses);
        Rng rng(trial_seed ^ 0x9e3779b97f4a7c15ull);
        features::Spectrogram spec;
        spec.values = Mat(kFrames, kBands);
        for (double& v : spec.values.data) v = 0.5 * rng.gaussian();
        spec.valid_frames = kFrames;
        const std::size_t label = trial_seed % kClasses;

        const GruState state = forward(params, spec);
        GruParams analytic = backward(params, state, spec, label);
        if (corrupt) analytic.head_w.data[0] += 1e-2;

        auto grads = analytic.tensors();
        auto theta = params.tensors();
        for (std::size_t ti = 0; ti < theta.size(); ++ti) {
            for (std::size_t i = 0; i < theta[ti].size(); ++i) {
                const double saved = theta[ti][i];
                theta[ti][i] = saved + kStep;
                const double up = loss(forward(params, spec).probs, label);
                theta[ti][i] = saved - kStep;
                const double down = loss(forward(params, spec).probs, label);
                theta[ti][i] = saved;
                const double fd = (up - down) / (2.0 * kStep);
                const double ga = grads[ti][i];
                const double rel = std::abs(ga - fd) /
                                   std::max(1e-6, std::abs(ga) + std::abs(fd));
                worst[ti] = std::max(worst[ti], rel);
            }
        }
    }

    bool ok = true;
    std::string offender;
    for (std::size_t ti = 0; ti < names.size(); ++ti) {
        std::printf("%-14s max_rel_err %.3e\n", names[ti].c_str(), worst[ti]);
        if (worst[ti] >= kTolerance && ok) {
            ok = false;
            offender = names[ti];
        }
    }
    if (!ok) {
        std::cerr << "gradient check failed: tensor " << offender << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"emotional speech mining and transfer-learning pipeline"};
    app.require_subcommand(1);

    CommonArgs bc_common;
    std::string bc_lexicon;
    std::optional<std::uint64_t> bc_neutral;
    auto* bc = app.add_subcommand(
        "build-corpus", "mine weak-labeled segments from subtitle/audio pairs");
    add_common(bc, bc_common);
    bc->add_option("--lexicon", bc_lexicon, "override lexicon path");
    bc->add_option("--neutral-count", bc_neutral,
                   "override labeling.neutral_sample_count");

    CommonArgs fz_common;
    std::string fz_manifest;
    auto* fz = app.add_subcommand("featurize",
                                  "cache banded spectrograms for a manifest");
    add_common(fz, fz_common);
    fz->add_option("--manifest", fz_manifest,
                   "manifest to featurize (default <out_dir>/manifest.csv)");

    CommonArgs pt_common;
    TrainOverrides pt_over;
    std::string pt_manifest, pt_model_out;
    auto* pt = app.add_subcommand("pretrain",
                                  "train the weak-sentiment classifier");
    add_common(pt, pt_common);
    add_train_overrides(pt, pt_over);
    pt->add_option("--manifest", pt_manifest,
                   "weak-label manifest (default <out_dir>/manifest.csv)");
    pt->add_option("--model-out", pt_model_out,
                   "model path (default <out_dir>/pretrained.emog)");

    CommonArgs ft_common;
    TrainOverrides ft_over;
    std::string ft_manifest, ft_model, ft_model_out;
    bool ft_scratch = false;
    auto* ft = app.add_subcommand(
        "finetune", "adapt a pretrained model to emotion classes");
    add_common(ft, ft_common);
    add_train_overrides(ft, ft_over);
    ft->add_option("--manifest", ft_manifest,
                   "emotion-labeled target manifest");
    ft->add_option("--model", ft_model, "pretrained model to start from");
    ft->add_flag("--from-scratch", ft_scratch,
                 "ignore pretraining and initialize randomly");
    ft->add_option("--model-out", ft_model_out,
                   "model path (default <out_dir>/finetuned.emog)");

    CommonArgs ev_common;
    std::string ev_model, ev_manifest, ev_report;
    auto* ev = app.add_subcommand("eval", "score a model on a manifest");
    add_common(ev, ev_common);
    ev->add_option("--model", ev_model, "model file")->required();
    ev->add_option("--manifest", ev_manifest,
                   "evaluation manifest (default <out_dir>/manifest.csv)");
    ev->add_option("--report", ev_report, "also write metrics JSON here");

    CommonArgs bin_common;
    TrainOverrides bin_over;
    std::string bin_pos = "happy", bin_neg, bin_train, bin_eval, bin_mined;
    auto* bin = app.add_subcommand(
        "binary", "two-class task with and without mined augmentation");
    add_common(bin, bin_common);
    add_train_overrides(bin, bin_over);
    bin->add_option("--positive", bin_pos, "positive class name");
    bin->add_option("--negative", bin_neg, "negative class name")->required();
    bin->add_option("--target-train", bin_train, "target training manifest")
        ->required();
    bin->add_option("--target-eval", bin_eval, "target evaluation manifest")
        ->required();
    bin->add_option("--mined", bin_mined,
                    "mined weak-label manifest (default <out_dir>/manifest.csv)");

    std::uint64_t gc_seed = 1;
    std::size_t gc_trials = 1;
    bool gc_corrupt = false;
    auto* gc = app.add_subcommand(
        "gradcheck", "finite-difference check of the analytic gradients");
    gc->add_option("--seed", gc_seed, "instance seed");
    gc->add_option("--trials", gc_trials, "number of random instances");
    gc->add_flag("--corrupt", gc_corrupt,
                 "perturb one analytic entry (self-test of the checker)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (bc->parsed()) return cmd_build_corpus(bc_common, bc_lexicon, bc_neutral);
        if (fz->parsed()) return cmd_featurize(fz_common, fz_manifest);
        if (pt->parsed())
            return cmd_pretrain(pt_common, pt_over, pt_manifest, pt_model_out);
        if (ft->parsed())
            return cmd_finetune(ft_common, ft_over, ft_manifest, ft_model,
                                ft_scratch, ft_model_out);
        if (ev->parsed())
            return cmd_eval(ev_common, ev_model, ev_manifest, ev_report);
        if (bin->parsed())
            return cmd_binary(bin_common, bin_over, bin_pos, bin_neg,
                              bin_train, bin_eval, bin_mined);
        if (gc->parsed()) return cmd_gradcheck(gc_seed, gc_trials, gc_corrupt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NonFiniteLossError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NonFiniteInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitConfig;
}
