#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "emomine/error.hpp"

namespace emomine {

class EmptyEvalSetError : public Error {
public:
    using Error::Error;
};

// Classification quality summary. Rates for a class nobody predicted (or
// that has no true examples) are defined as 0 rather than NaN, so the
// macro average stays meaningful on skewed sets.
struct MetricsReport {
    std::size_t class_count = 0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> precision;  // per class
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<std::uint64_t> confusion_counts;  // row-major, rows = truth

    std::uint64_t confusion(std::size_t truth, std::size_t predicted) const {
        return confusion_counts[truth * class_count + predicted];
    }
    std::uint64_t total() const;
};

// truth and predictions are parallel vectors of class indices in
// [0, class_count).
MetricsReport compute_metrics(const std::vector<std::size_t>& truth,
                              const std::vector<std::size_t>& predictions,
                              std::size_t class_count);

}  // namespace emomine
