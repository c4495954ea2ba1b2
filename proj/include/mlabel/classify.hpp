#pragma once

#include <string>
#include <vector>

#include "mlabel/ranker.hpp"
#include "mlabel/select.hpp"

namespace mlabel {

struct ClassifyOptions {
    std::size_t k = 25;
    Strategy strategy = Strategy::cutoff;
    double tau = 0.5;
    double alpha = 1.6;
    bool exclude_self = false;  // on when scoring documents that live in the index
};

struct Prediction {
    std::string id;
    LabelSet labels;
    RankedLabels ranked;
};

// top-k retrieval -> candidate collection -> features -> model scores ->
// selection. Documents whose neighbors carry no labels get an empty
// prediction with a warning; unclassifiable documents throw.
Prediction classify(const Document& doc, const RankerModel& model, const VectorIndex& index,
                    const LabelVocabulary& vocab, const ClassifyOptions& opts);

// Batch variant; order of results matches the input order.
std::vector<Prediction> classify_all(const std::vector<Document>& docs, const RankerModel& model,
                                     const VectorIndex& index, const LabelVocabulary& vocab,
                                     const ClassifyOptions& opts, unsigned threads = 1);

// JSON Lines {"id":..., "labels":[...], "ranked":[[label, score], ...]}.
void save_predictions(const std::vector<Prediction>& preds, const std::string& path);
std::vector<Prediction> load_predictions(const std::string& path);

}  // namespace mlabel
