#pragma once

#include <string>
#include <vector>

#include "mlabel/ranker.hpp"

namespace mlabel {

enum class Strategy : std::uint8_t { threshold = 0, avgsize = 1, cutoff = 2 };

Strategy parse_strategy(const std::string& name);  // threshold | avgsize | cutoff
const char* strategy_name(Strategy s);

// a) every label with relevance >= tau (boundary inclusive); may be empty.
LabelSet select_threshold(const RankedLabels& ranked, double tau = 0.5);

// b) top-N where N is the round-half-up mean of the neighbors' label-set
// sizes, clamped to [1, |ranked|].
LabelSet select_average_size(const RankedLabels& ranked, const std::vector<Neighbor>& neighbors);

// c) zero-score labels are dropped, then N is the first position i where
// s[i+1]/s[i] < i/(i+1+alpha); at least one label is kept when any scored.
LabelSet select_cutoff(const RankedLabels& ranked, double alpha = 1.6);

}  // namespace mlabel
