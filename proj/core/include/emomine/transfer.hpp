#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emomine/error.hpp"
#include "emomine/features.hpp"
#include "emomine/gru.hpp"
#include "emomine/metrics.hpp"

namespace emomine {

class EmptyCorpusError : public Error {
public:
    using Error::Error;
};

class SingleClassCorpusError : public Error {
public:
    using Error::Error;
};

class UnknownLabelError : public Error {
public:
    using Error::Error;
};

// Ordered set of class names; the position of a name is its class index.
struct LabelSpace {
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;
    void validate() const;  // non-empty, unique names

    // Weak sentiment classes used for pretraining on mined speech.
    static LabelSpace pretrain();
    // Emotion classes used for fine-tuning.
    static LabelSpace finetune();
};

struct SplitSpec {
    double validation_fraction = 0.10;
    std::uint64_t rng_seed = 0;

    void validate() const;  // 0 < fraction < 0.5
};

struct SplitResult {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

// Class-stratified holdout: per class with n >= 2 members, reserves
// max(1, floor(fraction * n)) of them (never all) for validation;
// singleton classes stay in the training side. Deterministic per seed;
// the returned index lists are sorted and partition the dataset.
SplitResult stratified_split(const std::vector<std::size_t>& labels,
                             std::size_t class_count, const SplitSpec& spec);

// In-memory dataset: parallel feature/label vectors plus the label space
// the indices refer to. Features are raw (not yet standardized).
struct Dataset {
    std::vector<Spectrogram> features;
    std::vector<std::size_t> labels;
    LabelSpace space;

    std::size_t size() const { return features.size(); }
};

// Reads a manifest and the feature file cached next to each audio path.
// Every label must belong to the given space and every feature file must
// already exist.
Dataset load_dataset(const std::string& manifest_path, const LabelSpace& space);

// Per-band mean and standard deviation over every valid frame of the
// selected examples; deviations are floored at 1e-8.
struct Standardization {
    Vec mean;
    Vec std_dev;
};

Standardization compute_standardization(
    const Dataset& data, const std::vector<std::size_t>& indices);

Spectrogram standardize(const Spectrogram& spec, const Vec& mean,
                        const Vec& std_dev);

struct EpochRecord {
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainRun {
    Model model;  // parameters restored to the best epoch
    std::vector<EpochRecord> history;
    std::size_t best_epoch = 0;  // index into history
    double best_val_loss = 0.0;
    double wall_seconds = 0.0;

    double best_val_accuracy() const {
        return history.empty() ? 0.0 : history[best_epoch].val_accuracy;
    }
};

// Trains a fresh model on the dataset with early stopping on a stratified
// holdout: stop once validation loss has not strictly improved for
// cfg.patience consecutive epochs and restore the best epoch's
// parameters. Standardization is computed on the training side only.
TrainRun pretrain(const Dataset& data, const TrainConfig& cfg,
                  const SplitSpec& split,
                  std::size_t hidden_dim = kDefaultHiddenDim);

// Same training protocol, different initialization: alias kept separate
// so call sites say what they mean.
TrainRun train_from_scratch(const Dataset& data, const TrainConfig& cfg,
                            const SplitSpec& split,
                            std::size_t hidden_dim = kDefaultHiddenDim);

// Copies the recurrent parameters verbatim and re-initializes only the
// softmax head for the new classes. Standardization carries over.
Model replace_head(const Model& base, const LabelSpace& new_space,
                   std::uint64_t rng_seed);

// Continues training the given model (all layers trainable) on the target
// dataset with the same early-stopping protocol. The base model's
// standardization statistics are kept so the recurrent layers keep seeing
// inputs on the scale they were trained on.
TrainRun finetune(const Model& base, const Dataset& data,
                  const TrainConfig& cfg, const SplitSpec& split);

// Applies the model (with its stored standardization) to every example
// and scores the argmax predictions.
MetricsReport evaluate(const Model& model, const Dataset& data);

struct BinaryTaskConfig {
    std::string positive_class;  // target class mined positives join
    std::string negative_class;  // target class mined negatives join
    TrainConfig train;
    SplitSpec split;
    std::size_t hidden_dim = kDefaultHiddenDim;
};

struct BinaryTaskResult {
    TrainRun baseline_run;   // target data alone
    TrainRun augmented_run;  // target data + relabeled mined samples
    MetricsReport baseline;
    MetricsReport augmented;
};

// Two-class experiment: trains on the target data alone and again with
// mined weak-label samples appended (positives relabeled to
// positive_class, negatives to negative_class, neutrals dropped), then
// evaluates both models on the same held-out set.
BinaryTaskResult run_binary_task(const Dataset& target_train,
                                 const Dataset& target_eval,
                                 const Dataset& mined,
                                 const BinaryTaskConfig& cfg);

// JSON run report <task>_<seed>.report.json in out_dir: config echo,
// per-epoch losses, best epoch, metrics (when present), wall time.
std::filesystem::path write_report(const std::filesystem::path& out_dir,
                                   const std::string& task,
                                   const TrainConfig& cfg,
                                   const SplitSpec& split, const TrainRun& run,
                                   const MetricsReport* metrics);

}  // namespace emomine
