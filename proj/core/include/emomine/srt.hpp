#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "emomine/error.hpp"

namespace emomine::srt {

class NotUtf8Error : public Error {
public:
    using Error::Error;
};

class EmptyFileError : public Error {
public:
    using Error::Error;
};

// One timed subtitle phrase. Text is normalized: markup tags stripped,
// lines joined with single spaces, no CR, no leading/trailing blanks,
// no runs of two or more spaces.
struct SubtitleCue {
    int index = 0;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    std::string text;

    bool operator==(const SubtitleCue&) const = default;
};

struct CueFilterPolicy {
    int max_chars = 100;  // cues with more characters are dropped
    int min_words = 4;    // cues with fewer words are dropped
};

struct ParseResult {
    std::vector<SubtitleCue> cues;
    std::vector<Diag> warnings;
};

// Parses SubRip text. Tolerates BOM, CRLF, and malformed blocks (skipped
// with a warning). Throws NotUtf8Error for undecodable bytes and
// EmptyFileError when not a single cue parses.
ParseResult parse_srt(std::string_view raw, const std::string& source_name = "");

// Keeps cues with at most policy.max_chars characters and at least
// policy.min_words space-separated words. Order preserved.
std::vector<SubtitleCue> filter_cues(const std::vector<SubtitleCue>& cues,
                                     const CueFilterPolicy& policy);

// Renders cues back to SubRip text; parse_srt(format_srt(cues)) round-trips.
std::string format_srt(const std::vector<SubtitleCue>& cues);

bool is_valid_utf8(std::string_view bytes);

// Unicode code points in a valid UTF-8 string.
std::size_t count_codepoints(std::string_view text);

std::size_t count_words(std::string_view normalized_text);

}  // namespace emomine::srt
