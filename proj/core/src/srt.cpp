#include "emomine/srt.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace emomine::srt {

namespace {

// Splits into lines on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == text.size()) break;
        pos = nl + 1;
    }
    return lines;
}

bool is_blank(std::string_view line) {
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

bool parse_index(std::string_view line, int& out) {
    line = trim(line);
    if (line.empty()) return false;
    long long value = 0;
    auto res = std::from_chars(line.data(), line.data() + line.size(), value);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size()) return false;
    if (value <= 0 || value > INT32_MAX) return false;
    out = static_cast<int>(value);
    return true;
}

// "HH:MM:SS,mmm" with any hour width; a '.' before the millis also occurs
// in the wild and is accepted.
bool parse_timestamp(std::string_view s, std::int64_t& out_ms) {
    s = trim(s);
    long long parts[3] = {0, 0, 0};
    std::size_t pos = 0;
    for (int p = 0; p < 3; ++p) {
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) return false;
        auto res = std::from_chars(s.data() + start, s.data() + pos, parts[p]);
        if (res.ec != std::errc()) return false;
        if (p < 2) {
            if (pos >= s.size() || s[pos] != ':') return false;
            ++pos;
        }
    }
    if (pos >= s.size() || (s[pos] != ',' && s[pos] != '.')) return false;
    ++pos;
    std::size_t ms_start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == ms_start || pos - ms_start > 3 || pos != s.size()) return false;
    long long ms = 0;
    std::from_chars(s.data() + ms_start, s.data() + pos, ms);
    // Short millisecond fields are left-aligned: "7" means 700 ms.
    for (std::size_t i = pos - ms_start; i < 3; ++i) ms *= 10;
    if (parts[0] > 9999 || parts[1] > 59 || parts[2] > 59) return false;
    out_ms = ((parts[0] * 60 + parts[1]) * 60 + parts[2]) * 1000 + ms;
    return true;
}

bool parse_timing_line(std::string_view line, std::int64_t& start_ms, std::int64_t& end_ms) {
    const std::size_t arrow = line.find("-->");
    if (arrow == std::string_view::npos) return false;
    return parse_timestamp(line.substr(0, arrow), start_ms) &&
           parse_timestamp(line.substr(arrow + 3), end_ms);
}

// Joins text lines with single spaces, strips <...> spans non-greedily,
// collapses whitespace runs, trims the ends.
std::string normalize_text(const std::vector<std::string_view>& lines) {
    std::string joined;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) joined.push_back(' ');
        joined.append(lines[i]);
    }
    std::string untagged;
    untagged.reserve(joined.size());
    bool in_tag = false;
    for (char c : joined) {
        if (in_tag) {
            if (c == '>') in_tag = false;
            continue;
        }
        if (c == '<') {
            in_tag = true;
            continue;
        }
        untagged.push_back(c);
    }
    std::string out;
    out.reserve(untagged.size());
    bool pending_space = false;
    for (char c : untagged) {
        if (c == ' ' || c == '\t' || c == '\r') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const unsigned char b = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        unsigned cp_min;
        if (b < 0x80) {
            ++i;
            continue;
        } else if ((b & 0xE0) == 0xC0) {
            len = 2;
            cp_min = 0x80;
        } else if ((b & 0xF0) == 0xE0) {
            len = 3;
            cp_min = 0x800;
        } else if ((b & 0xF8) == 0xF0) {
            len = 4;
            cp_min = 0x10000;
        } else {
            return false;
        }
        if (i + len > n) return false;
        unsigned cp = b & (0xFF >> (len + 1));
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char cont = static_cast<unsigned char>(bytes[i + k]);
            if ((cont & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cont & 0x3F);
        }
        if (cp < cp_min) return false;                    // overlong encoding
        if (cp > 0x10FFFF) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;   // surrogate range
        i += len;
    }
    return true;
}

std::size_t count_codepoints(std::string_view text) {
    std::size_t count = 0;
    for (char c : text) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++count;
    }
    return count;
}

std::size_t count_words(std::string_view normalized_text) {
    if (normalized_text.empty()) return 0;
    std::size_t words = 1;
    for (char c : normalized_text) {
        if (c == ' ') ++words;
    }
    return words;
}

ParseResult parse_srt(std::string_view raw, const std::string& source_name) {
    if (raw.size() >= 3 && static_cast<unsigned char>(raw[0]) == 0xEF &&
        static_cast<unsigned char>(raw[1]) == 0xBB && static_cast<unsigned char>(raw[2]) == 0xBF) {
        raw.remove_prefix(3);
    }
    if (!is_valid_utf8(raw)) {
        throw NotUtf8Error("not valid UTF-8: " + (source_name.empty() ? "<input>" : source_name));
    }

    ParseResult result;
    const std::vector<std::string_view> lines = split_lines(raw);

    long block_ordinal = 0;
    std::size_t i = 0;
    while (i < lines.size()) {
        while (i < lines.size() && is_blank(lines[i])) ++i;
        if (i >= lines.size()) break;

        ++block_ordinal;
        std::vector<std::string_view> block;
        while (i < lines.size() && !is_blank(lines[i])) {
            block.push_back(lines[i]);
            ++i;
        }

        SubtitleCue cue;
        std::size_t text_start;
        if (block.size() >= 2 && parse_index(block[0], cue.index) &&
            parse_timing_line(block[1], cue.start_ms, cue.end_ms)) {
            text_start = 2;
        } else if (!block.empty() && parse_timing_line(block[0], cue.start_ms, cue.end_ms)) {
            // Index line missing; assign the block ordinal.
            cue.index = static_cast<int>(block_ordinal);
            text_start = 1;
        } else {
            result.warnings.push_back({source_name, block_ordinal, "malformed block"});
            continue;
        }

        if (cue.end_ms <= cue.start_ms) {
            result.warnings.push_back({source_name, block_ordinal, "end time not after start time"});
            continue;
        }

        cue.text = normalize_text({block.begin() + text_start, block.end()});
        result.cues.push_back(std::move(cue));
    }

    if (result.cues.empty()) {
        throw EmptyFileError("no parseable cue in " + (source_name.empty() ? "<input>" : source_name));
    }
    return result;
}

std::vector<SubtitleCue> filter_cues(const std::vector<SubtitleCue>& cues,
                                     const CueFilterPolicy& policy) {
    std::vector<SubtitleCue> kept;
    for (const SubtitleCue& cue : cues) {
        if (count_codepoints(cue.text) > static_cast<std::size_t>(policy.max_chars)) continue;
        if (count_words(cue.text) < static_cast<std::size_t>(policy.min_words)) continue;
        kept.push_back(cue);
    }
    return kept;
}

std::string format_srt(const std::vector<SubtitleCue>& cues) {
    std::string out;
    char stamp[64];
    for (const SubtitleCue& cue : cues) {
        auto fmt = [&stamp](std::int64_t ms) {
            const std::int64_t h = ms / 3600000;
            const std::int64_t m = (ms / 60000) % 60;
            const std::int64_t s = (ms / 1000) % 60;
            const std::int64_t r = ms % 1000;
            std::snprintf(stamp, sizeof(stamp), "%02lld:%02lld:%02lld,%03lld",
                          static_cast<long long>(h), static_cast<long long>(m),
                          static_cast<long long>(s), static_cast<long long>(r));
            return std::string(stamp);
        };
        out += std::to_string(cue.index);
        out += '\n';
        out += fmt(cue.start_ms) + " --> " + fmt(cue.end_ms);
        out += '\n';
        out += cue.text;
        out += "\n\n";
    }
    return out;
}

}  // namespace emomine::srt
