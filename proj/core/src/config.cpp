#include "emomine/config.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace emomine {

namespace {

using nlohmann::json;

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object())
        throw ConfigError(where + " must be an object");
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
    std::unordered_set<std::string> ok;
    for (const char* k : allowed) ok.insert(k);
    for (const auto& item : obj.items())
        if (!ok.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

double read_double(const json& obj, const char* key, double fallback,
                   const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(where + "." + key + " must be a number");
    return v.get<double>();
}

std::uint64_t read_uint(const json& obj, const char* key,
                        std::uint64_t fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
        throw ConfigError(where + "." + key +
                          " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

int read_int(const json& obj, const char* key, int fallback,
             const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(where + "." + key + " must be an integer");
    return v.get<int>();
}

bool read_bool(const json& obj, const char* key, bool fallback,
               const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ConfigError(where + "." + key + " must be a boolean");
    return v.get<bool>();
}

std::string read_string(const json& obj, const char* key,
                        const std::string& fallback,
                        const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string())
        throw ConfigError(where + "." + key + " must be a string");
    return v.get<std::string>();
}

void parse_inputs(const json& arr, PipelineConfig& cfg) {
    if (!arr.is_array()) throw ConfigError("inputs must be an array");
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& entry = arr[i];
        const std::string where = "inputs[" + std::to_string(i) + "]";
        expect_object(entry, where);
        reject_unknown_keys(entry, where, {"id", "srt", "wav"});
        corpus::MovieInput in;
        in.source_id = read_string(entry, "id", "", where);
        in.srt_path = read_string(entry, "srt", "", where);
        in.wav_path = read_string(entry, "wav", "", where);
        if (in.source_id.empty() || in.srt_path.empty() || in.wav_path.empty())
            throw ConfigError(where + " needs non-empty id, srt and wav");
        if (!ids.insert(in.source_id).second)
            throw ConfigError("duplicate input id '" + in.source_id + "'");
        cfg.inputs.push_back(std::move(in));
    }
}

}  // namespace

void PipelineConfig::validate() const {
    if (out_dir.empty()) throw ConfigError("out_dir must not be empty");
    if (cue_filter.max_chars <= 0)
        throw ConfigError("cue_filter.max_chars must be positive");
    if (cue_filter.min_words < 0)
        throw ConfigError("cue_filter.min_words must not be negative");
    if (!(sentiment_alpha > 0.0))
        throw ConfigError("sentiment.alpha must be positive");
    if (hidden_dim == 0) throw ConfigError("hidden_dim must be positive");
    try {
        labeling.validate();
        stft.validate(0.0);  // Nyquist is checked against real audio later
        train.validate();
        split.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

PipelineConfig parse_config(const std::string& text,
                            const std::string& source_name) {
    json root;
    try {
        root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError(source_name + ": " + e.what());
    }
    expect_object(root, source_name.empty() ? "config" : source_name);
    reject_unknown_keys(root, "config",
                        {"lexicon", "out_dir", "inputs", "cue_filter",
                         "labeling", "stft", "train", "split", "sentiment",
                         "hidden_dim"});

    PipelineConfig cfg;
    cfg.lexicon_path = read_string(root, "lexicon", "", "config");
    cfg.out_dir = read_string(root, "out_dir", cfg.out_dir, "config");
    cfg.hidden_dim = static_cast<std::size_t>(
        read_uint(root, "hidden_dim", cfg.hidden_dim, "config"));
    if (root.contains("inputs")) parse_inputs(root.at("inputs"), cfg);

    if (root.contains("cue_filter")) {
        const json& s = root.at("cue_filter");
        expect_object(s, "cue_filter");
        reject_unknown_keys(s, "cue_filter", {"max_chars", "min_words"});
        cfg.cue_filter.max_chars =
            read_int(s, "max_chars", cfg.cue_filter.max_chars, "cue_filter");
        cfg.cue_filter.min_words =
            read_int(s, "min_words", cfg.cue_filter.min_words, "cue_filter");
    }

    if (root.contains("labeling")) {
        const json& s = root.at("labeling");
        expect_object(s, "labeling");
        reject_unknown_keys(s, "labeling",
                            {"positive_threshold", "negative_threshold",
                             "neutral_band", "neutral_sample_count",
                             "rng_seed"});
        cfg.labeling.positive_threshold =
            read_double(s, "positive_threshold",
                        cfg.labeling.positive_threshold, "labeling");
        cfg.labeling.negative_threshold =
            read_double(s, "negative_threshold",
                        cfg.labeling.negative_threshold, "labeling");
        cfg.labeling.neutral_band =
            read_double(s, "neutral_band", cfg.labeling.neutral_band,
                        "labeling");
        if (s.contains("neutral_sample_count")) {
            const json& v = s.at("neutral_sample_count");
            if (v.is_null()) {
                cfg.labeling.neutral_sample_count.reset();
            } else if (v.is_number_integer() && v.get<long long>() >= 0) {
                cfg.labeling.neutral_sample_count = v.get<std::uint64_t>();
            } else {
                throw ConfigError(
                    "labeling.neutral_sample_count must be null or a "
                    "non-negative integer");
            }
        }
        cfg.labeling.rng_seed =
            read_uint(s, "rng_seed", cfg.labeling.rng_seed, "labeling");
    }

    if (root.contains("stft")) {
        const json& s = root.at("stft");
        expect_object(s, "stft");
        reject_unknown_keys(s, "stft",
                            {"window", "hop", "fmin_hz", "fmax_hz", "bands",
                             "max_frames", "log_spaced_bands",
                             "log_compress"});
        cfg.stft.window_len = static_cast<std::size_t>(
            read_uint(s, "window", cfg.stft.window_len, "stft"));
        cfg.stft.hop = static_cast<std::size_t>(
            read_uint(s, "hop", cfg.stft.hop, "stft"));
        cfg.stft.fmin_hz = read_double(s, "fmin_hz", cfg.stft.fmin_hz, "stft");
        cfg.stft.fmax_hz = read_double(s, "fmax_hz", cfg.stft.fmax_hz, "stft");
        cfg.stft.n_bands = static_cast<std::size_t>(
            read_uint(s, "bands", cfg.stft.n_bands, "stft"));
        cfg.stft.max_frames = static_cast<std::size_t>(
            read_uint(s, "max_frames", cfg.stft.max_frames, "stft"));
        cfg.stft.log_spaced_bands = read_bool(
            s, "log_spaced_bands", cfg.stft.log_spaced_bands, "stft");
        cfg.stft.log_compress =
            read_bool(s, "log_compress", cfg.stft.log_compress, "stft");
    }

    if (root.contains("train")) {
        const json& s = root.at("train");
        expect_object(s, "train");
        reject_unknown_keys(s, "train",
                            {"learning_rate", "adam_beta1", "adam_beta2",
                             "adam_eps", "batch_size", "max_epochs",
                             "patience", "grad_clip_norm", "rng_seed"});
        cfg.train.learning_rate =
            read_double(s, "learning_rate", cfg.train.learning_rate, "train");
        cfg.train.adam_beta1 =
            read_double(s, "adam_beta1", cfg.train.adam_beta1, "train");
        cfg.train.adam_beta2 =
            read_double(s, "adam_beta2", cfg.train.adam_beta2, "train");
        cfg.train.adam_eps =
            read_double(s, "adam_eps", cfg.train.adam_eps, "train");
        cfg.train.batch_size = static_cast<std::size_t>(
            read_uint(s, "batch_size", cfg.train.batch_size, "train"));
        cfg.train.max_epochs = static_cast<std::size_t>(
            read_uint(s, "max_epochs", cfg.train.max_epochs, "train"));
        cfg.train.patience = static_cast<std::size_t>(
            read_uint(s, "patience", cfg.train.patience, "train"));
        cfg.train.grad_clip_norm = read_double(
            s, "grad_clip_norm", cfg.train.grad_clip_norm, "train");
        cfg.train.rng_seed =
            read_uint(s, "rng_seed", cfg.train.rng_seed, "train");
    }

    if (root.contains("split")) {
        const json& s = root.at("split");
        expect_object(s, "split");
        reject_unknown_keys(s, "split", {"validation_fraction", "rng_seed"});
        cfg.split.validation_fraction = read_double(
            s, "validation_fraction", cfg.split.validation_fraction, "split");
        cfg.split.rng_seed =
            read_uint(s, "rng_seed", cfg.split.rng_seed, "split");
    }

    if (root.contains("sentiment")) {
        const json& s = root.at("sentiment");
        expect_object(s, "sentiment");
        reject_unknown_keys(s, "sentiment", {"alpha"});
        cfg.sentiment_alpha =
            read_double(s, "alpha", cfg.sentiment_alpha, "sentiment");
    }

    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace emomine
