#pragma once

#include <array>
#include <string>
#include <vector>

#include "mlabel/corpus.hpp"
#include "mlabel/vsm_index.hpp"

namespace mlabel {

// Feature layout shared by training and scoring:
//   0: f1  share of the k neighbors carrying the label          [0,1]
//   1: f2  similarity mass of those neighbors / k               [0,1]
//   2: f3  every token of the label name occurs in the document {0,1}
//   3: f4  some entry term (or the name) occurs contiguously    {0,1}
//   4: f5  total count of such contiguous matches               >= 0
//   5: f6  label name occurs contiguously in the title          {0,1}
inline constexpr std::size_t kNumFeatures = 6;
inline constexpr std::array<std::size_t, 3> kNumericFeatures = {0, 1, 4};

struct CandidateLabel {
    LabelId label;
    std::array<double, kNumFeatures> f{};
    double relevance = 0.0;
};

// Union of the neighbors' gold label sets; error on an empty neighbor list.
LabelSet collect_candidates(const std::vector<Neighbor>& neighbors);

// (f1, f2) for one candidate label over the neighbor list; k is the
// requested neighbor count (the 1/k normalizer), not the list length.
std::pair<double, double> neighbor_features(const LabelId& label,
                                            const std::vector<Neighbor>& neighbors,
                                            std::size_t k);

// (f3, f4, f5, f6) from the preprocessed document and title token streams.
std::array<double, 4> lexical_features(const LabelId& label, const TermList& doc_terms,
                                       const TermList& title_terms, const LabelVocabulary& vocab);
std::array<double, 4> lexical_features(const LabelId& label, const Document& doc,
                                       const LabelVocabulary& vocab);

// All six features for every candidate reachable from the neighbor list,
// sorted by label id.
std::vector<CandidateLabel> extract_candidates(const Document& doc,
                                               const std::vector<Neighbor>& neighbors,
                                               std::size_t k, const LabelVocabulary& vocab);

// Occurrences of needle as a contiguous token subsequence of haystack;
// an empty needle never matches.
std::size_t count_contiguous(const TermList& haystack, const TermList& needle);

}  // namespace mlabel
