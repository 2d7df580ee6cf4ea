#include "emomine/transfer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "emomine/corpus.hpp"
#include "emomine/rng.hpp"
#include "json.hpp"

namespace emomine {

namespace {

std::size_t argmax(const Vec& v) {
    return static_cast<std::size_t>(
        std::max_element(v.begin(), v.end()) - v.begin());
}

// Uniform feature width across a dataset, or throw.
std::size_t dataset_bands(const Dataset& data) {
    const std::size_t b = data.features.front().bands();
    for (const Spectrogram& s : data.features)
        if (s.bands() != b)
            throw DimensionMismatchError(
                "dataset mixes feature widths (" + std::to_string(b) +
                " vs " + std::to_string(s.bands()) + ")");
    return b;
}

void check_labels_in_range(const Dataset& data) {
    for (std::size_t l : data.labels)
        if (l >= data.space.size())
            throw UnknownLabelError("label index out of range for label space");
}

std::size_t distinct_class_count(const std::vector<std::size_t>& labels) {
    std::unordered_set<std::size_t> seen(labels.begin(), labels.end());
    return seen.size();
}

double accuracy_on(const GruParams& params,
                   const std::vector<TrainExample>& set) {
    std::size_t correct = 0;
    for (const TrainExample& ex : set)
        if (argmax(forward(params, *ex.features).probs) == ex.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(set.size());
}

// Shared training loop. `carried` supplies standardization statistics
// from a donor model; absent, they are computed on the training split.
TrainRun run_training(GruParams params, const Dataset& data,
                      const TrainConfig& cfg, const SplitSpec& split,
                      const Standardization* carried) {
    const auto t0 = std::chrono::steady_clock::now();
    cfg.validate();
    split.validate();
    if (data.size() == 0) throw EmptyCorpusError("dataset is empty");
    if (data.features.size() != data.labels.size())
        throw DimensionMismatchError("feature/label count mismatch");
    data.space.validate();
    check_labels_in_range(data);
    if (distinct_class_count(data.labels) < 2)
        throw SingleClassCorpusError(
            "dataset contains a single class; nothing to discriminate");
    const std::size_t bands = dataset_bands(data);
    if (bands != params.input_dim())
        throw DimensionMismatchError("feature width does not match model");
    if (data.space.size() != params.class_count())
        throw DimensionMismatchError("label space does not match model head");

    const SplitResult parts =
        stratified_split(data.labels, data.space.size(), split);
    if (parts.validation.empty())
        throw Error("validation split is empty; dataset too small");

    Standardization stats;
    if (carried != nullptr) {
        if (carried->mean.size() != bands || carried->std_dev.size() != bands)
            throw DimensionMismatchError(
                "carried standardization does not match feature width");
        stats = *carried;
    } else {
        stats = compute_standardization(data, parts.train);
    }

    std::vector<Spectrogram> standardized;
    standardized.reserve(data.size());
    for (const Spectrogram& s : data.features)
        standardized.push_back(standardize(s, stats.mean, stats.std_dev));

    std::vector<TrainExample> train_set, val_set;
    train_set.reserve(parts.train.size());
    for (std::size_t i : parts.train)
        train_set.push_back({&standardized[i], data.labels[i]});
    val_set.reserve(parts.validation.size());
    for (std::size_t i : parts.validation)
        val_set.push_back({&standardized[i], data.labels[i]});

    AdamState opt = AdamState::zeros_like(params);
    TrainRun run;
    GruParams best = params;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0;
    std::size_t stale_epochs = 0;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        EpochRecord rec;
        rec.train_loss = train_epoch(params, opt, train_set, cfg, epoch);
        rec.val_loss = evaluate_loss(params, val_set);
        rec.val_accuracy = accuracy_on(params, val_set);
        run.history.push_back(rec);
        if (rec.val_loss < best_val) {
            best_val = rec.val_loss;
            best_epoch = epoch;
            best = params;
            stale_epochs = 0;
        } else {
            ++stale_epochs;
        }
        if (stale_epochs >= cfg.patience) break;
    }

    run.model.params = std::move(best);
    run.model.labels = data.space.names;
    run.model.feature_mean = stats.mean;
    run.model.feature_std = stats.std_dev;
    run.best_epoch = best_epoch;
    run.best_val_loss = best_val;
    run.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return run;
}

nlohmann::json metrics_to_json(const MetricsReport& m) {
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

}  // namespace

std::optional<std::size_t> LabelSpace::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

void LabelSpace::validate() const {
    if (names.empty()) throw Error("label space is empty");
    std::unordered_set<std::string> seen;
    for (const std::string& n : names) {
        if (n.empty()) throw Error("label space contains an empty name");
        if (!seen.insert(n).second)
            throw Error("duplicate label name: " + n);
    }
}

LabelSpace LabelSpace::pretrain() {
    return LabelSpace{{"positive", "negative", "neutral"}};
}

LabelSpace LabelSpace::finetune() {
    return LabelSpace{{"angry", "happy", "sad", "neutral"}};
}

void SplitSpec::validate() const {
    if (!(validation_fraction > 0.0 && validation_fraction < 0.5))
        throw Error("validation_fraction must lie in (0, 0.5)");
}

SplitResult stratified_split(const std::vector<std::size_t>& labels,
                             std::size_t class_count, const SplitSpec& spec) {
    spec.validate();
    if (labels.empty()) throw EmptyCorpusError("cannot split an empty dataset");
    if (class_count == 0) throw Error("class_count must be positive");
    for (std::size_t l : labels)
        if (l >= class_count)
            throw UnknownLabelError("label index out of range in split input");

    SplitResult out;
    Rng rng(spec.rng_seed);
    for (std::size_t c = 0; c < class_count; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == c) members.push_back(i);
        if (members.size() < 2) {
            out.train.insert(out.train.end(), members.begin(), members.end());
            continue;
        }
        std::size_t n_val = static_cast<std::size_t>(
            spec.validation_fraction * static_cast<double>(members.size()));
        n_val = std::max<std::size_t>(n_val, 1);
        n_val = std::min(n_val, members.size() - 1);
        rng.shuffle(members);
        out.validation.insert(out.validation.end(), members.begin(),
                              members.begin() + static_cast<long>(n_val));
        out.train.insert(out.train.end(), members.begin() + static_cast<long>(n_val),
                         members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.validation.begin(), out.validation.end());
    return out;
}

Dataset load_dataset(const std::string& manifest_path,
                     const LabelSpace& space) {
    space.validate();
    const std::vector<corpus::ManifestRow> rows =
        corpus::read_manifest(manifest_path);
    if (rows.empty())
        throw EmptyCorpusError("manifest has no rows: " + manifest_path);
    Dataset data;
    data.space = space;
    data.features.reserve(rows.size());
    data.labels.reserve(rows.size());
    for (const corpus::ManifestRow& row : rows) {
        const auto idx = space.index_of(row.label);
        if (!idx)
            throw UnknownLabelError("manifest label '" + row.label +
                                    "' is not in the expected label space");
        const std::string feat = features::feature_path_for(row.audio_path);
        try {
            data.features.push_back(features::read_feature_file(feat));
        } catch (const Error& e) {
            throw Error("cannot load features for " + row.audio_path + " (" +
                        feat + "): " + e.what() +
                        "; run the featurize step first");
        }
        data.labels.push_back(*idx);
    }
    return data;
}

Standardization compute_standardization(
    const Dataset& data, const std::vector<std::size_t>& indices) {
    if (indices.empty())
        throw Error("cannot compute standardization from zero examples");
    for (std::size_t i : indices)
        if (i >= data.size())
            throw Error("standardization index out of range");
    const std::size_t bands = dataset_bands(data);

    Vec sum(bands, 0.0);
    std::uint64_t frames = 0;
    for (std::size_t i : indices) {
        const Spectrogram& s = data.features[i];
        for (std::size_t t = 0; t < s.valid_frames; ++t)
            for (std::size_t b = 0; b < bands; ++b)
                sum[b] += s.values(t, b);
        frames += s.valid_frames;
    }
    if (frames == 0) throw Error("standardization saw zero frames");

    Standardization st;
    st.mean.resize(bands);
    for (std::size_t b = 0; b < bands; ++b)
        st.mean[b] = sum[b] / static_cast<double>(frames);

    Vec sq(bands, 0.0);
    for (std::size_t i : indices) {
        const Spectrogram& s = data.features[i];
        for (std::size_t t = 0; t < s.valid_frames; ++t)
            for (std::size_t b = 0; b < bands; ++b) {
                const double d = s.values(t, b) - st.mean[b];
                sq[b] += d * d;
            }
    }
    st.std_dev.resize(bands);
    for (std::size_t b = 0; b < bands; ++b)
        st.std_dev[b] = std::max(
            std::sqrt(sq[b] / static_cast<double>(frames)), 1e-8);
    return st;
}

Spectrogram standardize(const Spectrogram& spec, const Vec& mean,
                        const Vec& std_dev) {
    if (mean.size() != spec.bands() || std_dev.size() != spec.bands())
        throw DimensionMismatchError(
            "standardization width does not match spectrogram");
    Spectrogram out = spec;
    for (std::size_t t = 0; t < out.valid_frames; ++t)
        for (std::size_t b = 0; b < out.bands(); ++b)
            out.values(t, b) = (out.values(t, b) - mean[b]) / std_dev[b];
    return out;
}

TrainRun pretrain(const Dataset& data, const TrainConfig& cfg,
                  const SplitSpec& split, std::size_t hidden_dim) {
    if (data.size() == 0) throw EmptyCorpusError("dataset is empty");
    const GruParams init = init_params(cfg.rng_seed, dataset_bands(data),
                                       hidden_dim, data.space.size());
    return run_training(init, data, cfg, split, nullptr);
}

TrainRun train_from_scratch(const Dataset& data, const TrainConfig& cfg,
                            const SplitSpec& split, std::size_t hidden_dim) {
    return pretrain(data, cfg, split, hidden_dim);
}

Model replace_head(const Model& base, const LabelSpace& new_space,
                   std::uint64_t rng_seed) {
    base.params.check_consistent();
    new_space.validate();
    Model out = base;
    const std::size_t h2 = 2 * base.params.hidden_dim();
    out.params.head_w = glorot_matrix(h2, new_space.size(), rng_seed);
    out.params.head_b.assign(new_space.size(), 0.0);
    out.labels = new_space.names;
    return out;
}

TrainRun finetune(const Model& base, const Dataset& data,
                  const TrainConfig& cfg, const SplitSpec& split) {
    base.params.check_consistent();
    if (data.space.names != base.labels)
        throw UnknownLabelError(
            "dataset label space does not match the model head; replace the "
            "head for the target classes first");
    Standardization carried{base.feature_mean, base.feature_std};
    return run_training(base.params, data, cfg, split, &carried);
}

MetricsReport evaluate(const Model& model, const Dataset& data) {
    model.params.check_consistent();
    if (data.size() == 0) throw EmptyEvalSetError("evaluation set is empty");
    if (data.features.size() != data.labels.size())
        throw DimensionMismatchError("feature/label count mismatch");
    check_labels_in_range(data);
    if (model.feature_mean.size() != model.params.input_dim() ||
        model.feature_std.size() != model.params.input_dim())
        throw DimensionMismatchError(
            "model standardization does not match its input width");

    LabelSpace model_space{model.labels};
    std::vector<std::size_t> truth, preds;
    truth.reserve(data.size());
    preds.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::string& name = data.space.names[data.labels[i]];
        const auto mapped = model_space.index_of(name);
        if (!mapped)
            throw UnknownLabelError("label '" + name +
                                    "' is outside the model's label space");
        truth.push_back(*mapped);
        const Spectrogram st =
            standardize(data.features[i], model.feature_mean,
                        model.feature_std);
        preds.push_back(argmax(forward(model.params, st).probs));
    }
    return compute_metrics(truth, preds, model.labels.size());
}

BinaryTaskResult run_binary_task(const Dataset& target_train,
                                 const Dataset& target_eval,
                                 const Dataset& mined,
                                 const BinaryTaskConfig& cfg) {
    cfg.train.validate();
    cfg.split.validate();
    if (cfg.positive_class.empty() || cfg.negative_class.empty() ||
        cfg.positive_class == cfg.negative_class)
        throw Error("binary task needs two distinct class names");

    const LabelSpace binary{{cfg.positive_class, cfg.negative_class}};

    auto map_to_binary = [&](const Dataset& src,
                             const char* which) -> Dataset {
        Dataset out;
        out.space = binary;
        out.features.reserve(src.size());
        out.labels.reserve(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
            const std::string& name = src.space.names[src.labels[i]];
            const auto idx = binary.index_of(name);
            if (!idx)
                throw UnknownLabelError(std::string(which) + " label '" +
                                        name +
                                        "' is not one of the task classes");
            out.features.push_back(src.features[i]);
            out.labels.push_back(*idx);
        }
        return out;
    };

    const Dataset base_train = map_to_binary(target_train, "target");

    const auto pos_idx =
        mined.space.index_of(corpus::to_string(corpus::WeakLabel::Positive));
    const auto neg_idx =
        mined.space.index_of(corpus::to_string(corpus::WeakLabel::Negative));
    if (!pos_idx || !neg_idx)
        throw UnknownLabelError(
            "mined dataset must use the weak sentiment label space");

    Dataset aug_train = base_train;
    for (std::size_t i = 0; i < mined.size(); ++i) {
        if (mined.labels[i] == *pos_idx) {
            aug_train.features.push_back(mined.features[i]);
            aug_train.labels.push_back(0);
        } else if (mined.labels[i] == *neg_idx) {
            aug_train.features.push_back(mined.features[i]);
            aug_train.labels.push_back(1);
        }
    }

    BinaryTaskResult result;
    result.baseline_run =
        train_from_scratch(base_train, cfg.train, cfg.split, cfg.hidden_dim);
    result.augmented_run =
        train_from_scratch(aug_train, cfg.train, cfg.split, cfg.hidden_dim);
    result.baseline = evaluate(result.baseline_run.model, target_eval);
    result.augmented = evaluate(result.augmented_run.model, target_eval);
    return result;
}

std::filesystem::path write_report(const std::filesystem::path& out_dir,
                                   const std::string& task,
                                   const TrainConfig& cfg,
                                   const SplitSpec& split, const TrainRun& run,
                                   const MetricsReport* metrics) {
    std::filesystem::create_directories(out_dir);
    nlohmann::json j;
    j["task"] = task;
    j["config"] = {{"learning_rate", cfg.learning_rate},
                   {"adam_beta1", cfg.adam_beta1},
                   {"adam_beta2", cfg.adam_beta2},
                   {"adam_eps", cfg.adam_eps},
                   {"batch_size", cfg.batch_size},
                   {"max_epochs", cfg.max_epochs},
                   {"patience", cfg.patience},
                   {"grad_clip_norm", cfg.grad_clip_norm},
                   {"rng_seed", cfg.rng_seed}};
    j["split"] = {{"validation_fraction", split.validation_fraction},
                  {"rng_seed", split.rng_seed}};
    nlohmann::json history = nlohmann::json::array();
    for (std::size_t e = 0; e < run.history.size(); ++e)
        history.push_back({{"epoch", e},
                           {"train_loss", run.history[e].train_loss},
                           {"val_loss", run.history[e].val_loss},
                           {"val_accuracy", run.history[e].val_accuracy}});
    j["history"] = history;
    j["best_epoch"] = run.best_epoch;
    j["best_val_loss"] = run.best_val_loss;
    j["labels"] = run.model.labels;
    j["wall_seconds"] = run.wall_seconds;
    if (metrics != nullptr) j["metrics"] = metrics_to_json(*metrics);

    const std::filesystem::path path =
        out_dir / (task + "_" + std::to_string(cfg.rng_seed) + ".report.json");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write report: " + path.string());
    out << j.dump(2) << "\n";
    return path;
}

}  // namespace emomine
