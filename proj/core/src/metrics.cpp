#include "emomine/metrics.hpp"

#include <string>

namespace emomine {

std::uint64_t MetricsReport::total() const {
    std::uint64_t n = 0;
    for (std::uint64_t c : confusion_counts) n += c;
    return n;
}

MetricsReport compute_metrics(const std::vector<std::size_t>& truth,
                              const std::vector<std::size_t>& predictions,
                              std::size_t class_count) {
    if (class_count == 0) throw Error("class_count must be positive");
    if (truth.size() != predictions.size())
        throw Error("truth and predictions differ in length");
    if (truth.empty()) throw EmptyEvalSetError("no examples to evaluate");

    MetricsReport rep;
    rep.class_count = class_count;
    rep.confusion_counts.assign(class_count * class_count, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= class_count || predictions[i] >= class_count)
            throw Error("class index out of range at example " +
                        std::to_string(i));
        rep.confusion_counts[truth[i] * class_count + predictions[i]] += 1;
    }

    std::uint64_t correct = 0;
    for (std::size_t c = 0; c < class_count; ++c) correct += rep.confusion(c, c);
    rep.accuracy = static_cast<double>(correct) /
                   static_cast<double>(truth.size());

    rep.precision.assign(class_count, 0.0);
    rep.recall.assign(class_count, 0.0);
    rep.f1.assign(class_count, 0.0);
    double f1_sum = 0.0;
    for (std::size_t c = 0; c < class_count; ++c) {
        const std::uint64_t tp = rep.confusion(c, c);
        std::uint64_t predicted = 0, actual = 0;
        for (std::size_t k = 0; k < class_count; ++k) {
            predicted += rep.confusion(k, c);
            actual += rep.confusion(c, k);
        }
        if (predicted > 0)
            rep.precision[c] =
                static_cast<double>(tp) / static_cast<double>(predicted);
        if (actual > 0)
            rep.recall[c] =
                static_cast<double>(tp) / static_cast<double>(actual);
        const double pr = rep.precision[c] + rep.recall[c];
        if (pr > 0.0)
            rep.f1[c] = 2.0 * rep.precision[c] * rep.recall[c] / pr;
        f1_sum += rep.f1[c];
    }
    rep.macro_f1 = f1_sum / static_cast<double>(class_count);
    return rep;
}

}  // namespace emomine
