#pragma once

#include <string>
#include <vector>

#include "emomine/corpus.hpp"
#include "emomine/error.hpp"
#include "emomine/features.hpp"
#include "emomine/gru.hpp"
#include "emomine/srt.hpp"
#include "emomine/transfer.hpp"

namespace emomine {

class ConfigError : public Error {
public:
    using Error::Error;
};

// One config document drives every pipeline stage. JSON with optional
// // comments; every section is optional and falls back to defaults, but
// unknown keys anywhere are rejected so typos cannot silently select a
// default.
struct PipelineConfig {
    std::string lexicon_path;
    std::string out_dir = "out";
    std::vector<corpus::MovieInput> inputs;
    srt::CueFilterPolicy cue_filter;
    corpus::LabelingPolicy labeling;
    features::StftConfig stft;
    TrainConfig train;
    SplitSpec split;
    double sentiment_alpha = 15.0;
    std::size_t hidden_dim = kDefaultHiddenDim;

    // Self-contained invariants (thresholds, training hyperparameters,
    // split fraction, filter sanity). Sample-rate-dependent checks run
    // when audio is actually opened.
    void validate() const;
};

PipelineConfig parse_config(const std::string& text,
                            const std::string& source_name);
PipelineConfig load_config(const std::string& path);

}  // namespace emomine
