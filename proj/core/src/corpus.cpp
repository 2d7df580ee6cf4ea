#include "emomine/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "emomine/rng.hpp"

namespace emomine::corpus {

const char* to_string(WeakLabel label) {
    switch (label) {
        case WeakLabel::Positive: return "positive";
        case WeakLabel::Negative: return "negative";
        case WeakLabel::Neutral: return "neutral";
    }
    return "?";
}

std::optional<WeakLabel> weak_label_from_string(std::string_view name) {
    if (name == "positive") return WeakLabel::Positive;
    if (name == "negative") return WeakLabel::Negative;
    if (name == "neutral") return WeakLabel::Neutral;
    return std::nullopt;
}

void LabelingPolicy::validate() const {
    if (!(negative_threshold < 0.0 && 0.0 < positive_threshold)) {
        throw Error("labeling thresholds must satisfy negative < 0 < positive");
    }
    if (!(neutral_band >= 0.0 &&
          neutral_band < std::min(positive_threshold, -negative_threshold))) {
        throw Error("neutral band must be below both thresholds");
    }
}

std::optional<WeakLabel> assign_label(double score, const LabelingPolicy& policy) {
    if (score > policy.positive_threshold) return WeakLabel::Positive;
    if (score < policy.negative_threshold) return WeakLabel::Negative;
    if (std::fabs(score) <= policy.neutral_band) return WeakLabel::Neutral;
    return std::nullopt;
}

std::vector<LabeledSegment> subsample_neutral(const std::vector<LabeledSegment>& candidates,
                                              std::uint64_t count, std::uint64_t rng_seed) {
    if (candidates.size() <= count) return candidates;

    std::vector<std::size_t> indices(candidates.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    Rng rng(rng_seed);
    rng.shuffle(indices);
    indices.resize(count);
    std::sort(indices.begin(), indices.end());

    std::vector<LabeledSegment> picked;
    picked.reserve(count);
    for (std::size_t i : indices) picked.push_back(candidates[i]);
    return picked;
}

AudioBuffer cut_segment(const AudioBuffer& audio, std::int64_t start_ms, std::int64_t end_ms) {
    if (start_ms < 0 || end_ms <= start_ms) {
        throw std::invalid_argument("cut_segment: need 0 <= start_ms < end_ms");
    }
    const std::uint64_t fs = audio.sample_rate_hz;
    const std::uint64_t begin = static_cast<std::uint64_t>(start_ms) * fs / 1000;
    std::uint64_t end = static_cast<std::uint64_t>(end_ms) * fs / 1000;
    if (begin >= audio.samples.size()) {
        throw OutOfRangeError("cut start " + std::to_string(start_ms) +
                              "ms is past the end of the audio");
    }
    if (end > audio.samples.size()) end = audio.samples.size();

    AudioBuffer cut;
    cut.sample_rate_hz = audio.sample_rate_hz;
    cut.samples.assign(audio.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                       audio.samples.begin() + static_cast<std::ptrdiff_t>(end));
    return cut;
}

namespace {

std::string csv_quote(const std::string& field) {
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string format_score(double score) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", score);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Minimal CSV line splitter with quote support. Returns false when the
// line ends inside a quoted field.
bool split_csv_line(const std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return !quoted;
}

}  // namespace

void write_manifest(const std::string& path, const std::vector<LabeledSegment>& segments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "source_id,start_ms,end_ms,label,score,audio_path,text\n";
    for (const LabeledSegment& seg : segments) {
        out << seg.source_id << ',' << seg.start_ms << ',' << seg.end_ms << ','
            << to_string(seg.label) << ',' << format_score(seg.score) << ',' << seg.audio_path
            << ',' << csv_quote(seg.text) << '\n';
    }
    if (!out) throw Error("short write to " + path);
}

void write_manifest_rows(const std::string& path, const std::vector<ManifestRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "source_id,start_ms,end_ms,label,score,audio_path,text\n";
    for (const ManifestRow& row : rows) {
        out << row.source_id << ',' << row.start_ms << ',' << row.end_ms << ',' << row.label << ','
            << format_score(row.score) << ',' << row.audio_path << ',' << csv_quote(row.text)
            << '\n';
    }
    if (!out) throw Error("short write to " + path);
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open manifest " + path);

    std::vector<ManifestRow> rows;
    std::string line;
    std::vector<std::string> fields;
    bool header = true;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!split_csv_line(line, fields) || fields.size() != 7) {
            throw Error(path + ":" + std::to_string(line_no) + ": malformed manifest row");
        }
        if (header) {
            header = false;
            if (fields[0] == "source_id") continue;  // header row
        }
        ManifestRow row;
        row.source_id = fields[0];
        try {
            row.start_ms = std::stoll(fields[1]);
            row.end_ms = std::stoll(fields[2]);
            row.score = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw Error(path + ":" + std::to_string(line_no) + ": non-numeric manifest field");
        }
        row.label = fields[3];
        row.audio_path = fields[5];
        row.text = fields[6];
        rows.push_back(std::move(row));
    }
    return rows;
}

BuildSummary build_corpus(const std::vector<MovieInput>& inputs,
                          const sentiment::SentimentLexicon& lexicon,
                          const BuildOptions& options) {
    options.labeling.validate();
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);

    BuildSummary summary;
    std::vector<LabeledSegment> kept;      // positive + negative
    std::vector<LabeledSegment> neutrals;  // all neutral candidates, subsampled later
    // Audio is cut and written only after the neutral subsample is known,
    // so segment files match the manifest exactly.

    for (const MovieInput& input : inputs) {
        std::vector<srt::SubtitleCue> cues;
        try {
            std::string raw = read_file(input.srt_path);
            srt::ParseResult parsed = srt::parse_srt(raw, input.srt_path);
            for (Diag& warning : parsed.warnings) summary.warnings.push_back(std::move(warning));
            cues = srt::filter_cues(parsed.cues, options.cue_filter);
        } catch (const Error& e) {
            summary.warnings.push_back({input.srt_path, 0, std::string("skipped: ") + e.what()});
            continue;
        }

        for (const srt::SubtitleCue& cue : cues) {
            const double score =
                sentiment::score_text(cue.text, lexicon, options.sentiment_alpha).value;
            const std::optional<WeakLabel> label = assign_label(score, options.labeling);
            if (!label) continue;

            LabeledSegment seg;
            seg.source_id = input.source_id;
            seg.start_ms = cue.start_ms;
            seg.end_ms = cue.end_ms;
            seg.label = *label;
            seg.score = score;
            seg.text = cue.text;
            seg.audio_path = input.wav_path;  // replaced with the segment path when cut
            (*label == WeakLabel::Neutral ? neutrals : kept).push_back(std::move(seg));
        }
    }

    // Neutral subsampling runs over the whole corpus after collection.
    std::size_t n_pos = 0, n_neg = 0;
    for (const LabeledSegment& seg : kept) {
        (seg.label == WeakLabel::Positive ? n_pos : n_neg)++;
    }
    const std::uint64_t neutral_count = options.labeling.neutral_sample_count
                                            ? *options.labeling.neutral_sample_count
                                            : static_cast<std::uint64_t>((n_pos + n_neg) / 2);
    std::vector<LabeledSegment> picked_neutrals =
        subsample_neutral(neutrals, neutral_count, options.labeling.rng_seed);
    for (LabeledSegment& seg : picked_neutrals) kept.push_back(std::move(seg));

    std::sort(kept.begin(), kept.end(), [](const LabeledSegment& a, const LabeledSegment& b) {
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
        return a.end_ms < b.end_ms;
    });

    // Cut and write the audio, one source file open at a time.
    std::string loaded_path;
    AudioBuffer loaded;
    for (LabeledSegment& seg : kept) {
        try {
            if (seg.audio_path != loaded_path) {
                loaded = read_wav_file(seg.audio_path);
                loaded_path = seg.audio_path;
            }
            const AudioBuffer slice = cut_segment(loaded, seg.start_ms, seg.end_ms);
            const std::string file_name = seg.source_id + "_" + std::to_string(seg.start_ms) +
                                          "_" + std::to_string(seg.end_ms) + ".wav";
            const std::string out_path = (fs::path(options.out_dir) / file_name).string();
            write_wav_file(out_path, slice);
            seg.audio_path = out_path;
            summary.segments.push_back(std::move(seg));
        } catch (const Error& e) {
            summary.warnings.push_back(
                {seg.source_id, seg.start_ms, std::string("segment skipped: ") + e.what()});
        }
    }

    for (const LabeledSegment& seg : summary.segments) {
        switch (seg.label) {
            case WeakLabel::Positive: summary.positive_count++; break;
            case WeakLabel::Negative: summary.negative_count++; break;
            case WeakLabel::Neutral: summary.neutral_count++; break;
        }
    }

    if (summary.segments.empty()) {
        throw NoSegmentsError("no segments produced from " + std::to_string(inputs.size()) +
                              " input(s)");
    }

    summary.manifest_path = (fs::path(options.out_dir) / "manifest.csv").string();
    write_manifest(summary.manifest_path, summary.segments);
    return summary;
}

}  // namespace emomine::corpus
