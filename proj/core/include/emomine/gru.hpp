#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "emomine/error.hpp"
#include "emomine/features.hpp"
#include "emomine/mat.hpp"

namespace emomine {

// The classifier consumes banded spectrograms; pull the type up so the
// training layers can name it without the module prefix.
using features::Spectrogram;

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class NonFiniteInputError : public Error {
public:
    using Error::Error;
};

class BadClassIndexError : public Error {
public:
    using Error::Error;
};

class NonFiniteLossError : public Error {
public:
    using Error::Error;
};

class BadModelFileError : public Error {
public:
    using Error::Error;
};

// One recurrent direction: three input-to-hidden matrices (B x H) and
// three hidden-to-hidden matrices (H x H), one triple per gate. Gates
// carry no bias terms.
struct DirectionParams {
    Mat in_update, in_reset, in_cand;
    Mat rec_update, rec_reset, rec_cand;
};

// Bi-directional recurrent classifier: independent parameters per
// direction, concatenated states pooled over time, linear + softmax head.
struct GruParams {
    DirectionParams fw, bw;
    Mat head_w;  // 2H x C
    Vec head_b;  // C

    std::size_t input_dim() const { return fw.in_update.rows; }
    std::size_t hidden_dim() const { return fw.in_update.cols; }
    std::size_t class_count() const { return head_b.size(); }

    // All tensors in the canonical order used by the optimizer, the
    // gradient checker and the model file: fw gates (input then
    // recurrent, update/reset/candidate), bw gates likewise, then head
    // weight and bias.
    std::vector<std::span<double>> tensors();
    std::vector<std::span<const double>> tensors() const;
    static const std::vector<std::string>& tensor_names();

    std::size_t parameter_count() const;
    void check_consistent() const;
};

constexpr std::size_t kDefaultHiddenDim = 32;

// Per-direction activations cached by the forward pass; index t runs over
// the valid frames in input order for both directions.
struct DirectionTrace {
    std::vector<Vec> update, reset, cand, state;
};

struct GruState {
    DirectionTrace fw, bw;
    Vec pooled;  // 2H temporal mean of concatenated states
    Vec probs;   // C softmax output
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 50;
    std::size_t patience = 10;
    double grad_clip_norm = 5.0;
    std::uint64_t rng_seed = 0;

    void validate() const;  // throws Error on nonsense values
};

// Glorot-uniform input and head matrices, orthogonal recurrent matrices,
// zero head bias. Deterministic per seed.
GruParams init_params(std::uint64_t rng_seed, std::size_t input_dim,
                      std::size_t hidden_dim, std::size_t class_count);

// Fresh Glorot-uniform matrix with fan-in = rows, fan-out = cols; used to
// re-initialize the classification head when the label space changes.
Mat glorot_matrix(std::size_t rows, std::size_t cols, std::uint64_t rng_seed);

GruParams zeros_like(const GruParams& shape);

// Runs both recurrences over the first spec.valid_frames rows, pools the
// concatenated states by temporal mean and applies the softmax head.
GruState forward(const GruParams& params, const Spectrogram& spec);

// Cross-entropy -ln p[true_class] with the probability clamped at 1e-12.
double loss(const Vec& probs, std::size_t true_class);

// Analytic gradients of loss(forward(params, spec), true_class) with the
// same shapes as the parameters. state must come from forward on the
// identical params/spec pair.
GruParams backward(const GruParams& params, const GruState& state,
                   const Spectrogram& spec, std::size_t true_class);

struct AdamState {
    GruParams m, v;
    std::uint64_t step = 0;

    static AdamState zeros_like(const GruParams& shape);
};

struct TrainExample {
    const Spectrogram* features = nullptr;  // borrowed, standardized
    std::size_t label = 0;
};

// One pass over the dataset: shuffle with cfg.rng_seed + epoch_index,
// average gradients per mini-batch, clip by global norm, apply Adam.
// Returns the mean per-example loss observed during the pass.
double train_epoch(GruParams& params, AdamState& opt,
                   const std::vector<TrainExample>& dataset,
                   const TrainConfig& cfg, std::size_t epoch_index);

// Mean loss over a dataset without touching the parameters.
double evaluate_loss(const GruParams& params,
                     const std::vector<TrainExample>& dataset);

// Trained model plus everything needed to apply it to raw feature files:
// class names and the per-band standardization computed on training data.
struct Model {
    GruParams params;
    std::vector<std::string> labels;
    Vec feature_mean;
    Vec feature_std;
};

// Binary little-endian weight file ("EMOG", version, dims, float64
// tensors in canonical order) plus a <path>.json sidecar holding labels
// and standardization vectors.
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

}  // namespace emomine
