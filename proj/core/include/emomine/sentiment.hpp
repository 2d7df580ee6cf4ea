#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "emomine/error.hpp"

namespace emomine::sentiment {

class MalformedLineError : public Error {
public:
    using Error::Error;
};

class EmptyLexiconError : public Error {
public:
    using Error::Error;
};

// Token valence table. Tokens are lowercase, non-empty, whitespace-free;
// valences in [-4, +4].
struct SentimentLexicon {
    std::map<std::string, double> entries;
};

struct LexiconLoadResult {
    SentimentLexicon lexicon;
    std::vector<Diag> warnings;
};

// Polarity in [-1, 1]; exactly 0 when no lexicon token matched.
struct SentimentScore {
    double value = 0.0;
};

// Parses tab-separated "token<TAB>valence" lines, '#' comments allowed.
// Duplicate tokens keep the last occurrence (with a warning).
LexiconLoadResult load_lexicon(std::string_view raw, const std::string& source_name = "");

// Bag-of-words scoring: lowercase, split on non-alphanumeric characters,
// sum matched valences s, return s / sqrt(s^2 + alpha).
SentimentScore score_text(std::string_view text, const SentimentLexicon& lexicon,
                          double alpha = 15.0);

std::vector<std::string> tokenize(std::string_view text);

}  // namespace emomine::sentiment
