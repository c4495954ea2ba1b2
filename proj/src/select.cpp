#include "mlabel/select.hpp"

#include <algorithm>
#include <cmath>

#include "mlabel/common.hpp"

namespace mlabel {

Strategy parse_strategy(const std::string& name) {
    if (name == "threshold") return Strategy::threshold;
    if (name == "avgsize") return Strategy::avgsize;
    if (name == "cutoff") return Strategy::cutoff;
    throw error("unknown strategy \"" + name + "\" (expected threshold, avgsize or cutoff)");
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::threshold: return "threshold";
        case Strategy::avgsize: return "avgsize";
        case Strategy::cutoff: return "cutoff";
    }
    return "?";
}

namespace {

LabelSet take_top(const RankedLabels& ranked, std::size_t n) {
    std::vector<LabelId> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n && i < ranked.size(); ++i) out.push_back(ranked[i].first);
    return make_label_set(std::move(out));
}

}  // namespace

LabelSet select_threshold(const RankedLabels& ranked, double tau) {
    std::vector<LabelId> out;
    for (const auto& [label, score] : ranked)
        if (score >= tau) out.push_back(label);
    return make_label_set(std::move(out));
}

LabelSet select_average_size(const RankedLabels& ranked, const std::vector<Neighbor>& neighbors) {
    if (neighbors.empty()) throw error("average-size selection needs a neighbor list");
    if (ranked.empty()) return {};
    double sum = 0.0;
    for (const auto& n : neighbors) sum += static_cast<double>(n.labels.size());
    const double mean = sum / static_cast<double>(neighbors.size());
    std::size_t n = static_cast<std::size_t>(std::floor(mean + 0.5));  // round half up
    n = std::clamp<std::size_t>(n, 1, ranked.size());
    return take_top(ranked, n);
}

LabelSet select_cutoff(const RankedLabels& ranked, double alpha) {
    RankedLabels positive;
    for (const auto& p : ranked)
        if (p.second > 0.0) positive.push_back(p);
    if (positive.empty()) return {};

    std::size_t n = positive.size();
    for (std::size_t i = 1; i < positive.size(); ++i) {
        const double ratio = positive[i].second / positive[i - 1].second;
        const double bound = static_cast<double>(i) / (static_cast<double>(i) + 1.0 + alpha);
        if (ratio < bound) {
            n = i;
            break;
        }
    }
    return take_top(positive, n);
}

}  // namespace mlabel
