#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emomine/error.hpp"
#include "emomine/sentiment.hpp"
#include "emomine/srt.hpp"
#include "emomine/wav.hpp"

namespace emomine::corpus {

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class NoSegmentsError : public Error {
public:
    using Error::Error;
};

enum class WeakLabel { Positive, Negative, Neutral };

const char* to_string(WeakLabel label);
std::optional<WeakLabel> weak_label_from_string(std::string_view name);

struct LabelingPolicy {
    double positive_threshold = 0.7;   // score strictly above -> positive
    double negative_threshold = -0.6;  // score strictly below -> negative
    double neutral_band = 0.05;        // |score| <= band -> neutral candidate
    // Neutral subsample size; unset means "mean of positive and negative
    // counts", computed after collection.
    std::optional<std::uint64_t> neutral_sample_count;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// One mined utterance.
struct LabeledSegment {
    std::string source_id;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    WeakLabel label = WeakLabel::Neutral;
    double score = 0.0;
    std::string text;
    std::string audio_path;
};

// A manifest row as read back from disk; the label is an arbitrary class
// name so the same CSV carries both weak-label and emotion-label corpora.
struct ManifestRow {
    std::string source_id;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string label;
    double score = 0.0;
    std::string audio_path;
    std::string text;
};

// Positive iff score > positive_threshold, negative iff score <
// negative_threshold, neutral candidate iff |score| <= neutral_band;
// anything else is discarded.
std::optional<WeakLabel> assign_label(double score, const LabelingPolicy& policy);

// Deterministic uniform subsample of size min(count, candidates); input
// order preserved among the survivors.
std::vector<LabeledSegment> subsample_neutral(const std::vector<LabeledSegment>& candidates,
                                              std::uint64_t count, std::uint64_t rng_seed);

// Samples from floor(start_ms*fs/1000) inclusive to floor(end_ms*fs/1000)
// exclusive; the end is clamped to the buffer, a start at or past the end
// of the buffer raises OutOfRangeError.
AudioBuffer cut_segment(const AudioBuffer& audio, std::int64_t start_ms, std::int64_t end_ms);

struct MovieInput {
    std::string srt_path;
    std::string wav_path;
    std::string source_id;
};

struct BuildOptions {
    srt::CueFilterPolicy cue_filter;
    LabelingPolicy labeling;
    double sentiment_alpha = 15.0;
    std::string out_dir;
};

struct BuildSummary {
    std::vector<LabeledSegment> segments;  // sorted by (source_id, start_ms)
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;
    std::size_t neutral_count = 0;
    std::vector<Diag> warnings;
    std::string manifest_path;
};

// Full mining pass: parse + filter subtitles, score sentiment, label,
// cut audio, write one WAV per segment and a manifest CSV. Per-movie
// failures are recorded as warnings; throws NoSegmentsError only when
// nothing at all was produced.
BuildSummary build_corpus(const std::vector<MovieInput>& inputs,
                          const sentiment::SentimentLexicon& lexicon, const BuildOptions& options);

// Manifest CSV, header: source_id,start_ms,end_ms,label,score,audio_path,text
void write_manifest(const std::string& path, const std::vector<LabeledSegment>& segments);
std::vector<ManifestRow> read_manifest(const std::string& path);
void write_manifest_rows(const std::string& path, const std::vector<ManifestRow>& rows);

}  // namespace emomine::corpus
