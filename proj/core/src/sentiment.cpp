#include "emomine/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace emomine::sentiment {

namespace {

bool parse_valence(std::string_view field, double& out) {
    if (field.empty()) return false;
    std::string buf(field);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size() && std::isfinite(out);
}

}  // namespace

LexiconLoadResult load_lexicon(std::string_view raw, const std::string& source_name) {
    LexiconLoadResult result;
    long line_no = 0;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        std::size_t nl = raw.find('\n', pos);
        if (nl == std::string_view::npos) nl = raw.size();
        std::string_view line = raw.substr(pos, nl - pos);
        ++line_no;
        const bool last = nl == raw.size();
        pos = nl + 1;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line[0] == '#') {
            if (last) break;
            continue;
        }

        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
            throw MalformedLineError(source_name + ":" + std::to_string(line_no) +
                                     ": expected token<TAB>valence");
        }
        std::string token(line.substr(0, tab));
        double valence = 0.0;
        if (token.empty() || !parse_valence(line.substr(tab + 1), valence)) {
            throw MalformedLineError(source_name + ":" + std::to_string(line_no) +
                                     ": bad token or non-numeric valence");
        }
        for (char& c : token) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                throw MalformedLineError(source_name + ":" + std::to_string(line_no) +
                                         ": whitespace inside token");
            }
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (valence < -4.0 || valence > 4.0) {
            throw MalformedLineError(source_name + ":" + std::to_string(line_no) +
                                     ": valence outside [-4, 4]");
        }
        auto [it, inserted] = result.lexicon.entries.insert_or_assign(std::move(token), valence);
        if (!inserted) {
            result.warnings.push_back({source_name, line_no, "duplicate token '" + it->first +
                                                                 "', keeping last value"});
        }
        if (last) break;
    }
    if (result.lexicon.entries.empty()) {
        throw EmptyLexiconError("lexicon has no entries: " +
                                (source_name.empty() ? "<input>" : source_name));
    }
    return result;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            current.push_back(static_cast<char>(std::tolower(u)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

SentimentScore score_text(std::string_view text, const SentimentLexicon& lexicon, double alpha) {
    double sum = 0.0;
    bool matched = false;
    for (const std::string& token : tokenize(text)) {
        auto it = lexicon.entries.find(token);
        if (it != lexicon.entries.end()) {
            sum += it->second;
            matched = true;
        }
    }
    if (!matched) return {0.0};
    return {sum / std::sqrt(sum * sum + alpha)};
}

}  // namespace emomine::sentiment
