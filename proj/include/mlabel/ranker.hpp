#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mlabel/corpus.hpp"
#include "mlabel/discretize.hpp"
#include "mlabel/features.hpp"
#include "mlabel/vsm_index.hpp"

namespace mlabel {

// Ordered (label, relevance) list, scores non-increasing, ties by label id.
using RankedLabels = std::vector<std::pair<LabelId, double>>;

enum class Algorithm : std::uint8_t { naive_bayes = 0, decision_tree = 1, random_forest = 2 };

Algorithm parse_algorithm(const std::string& name);  // nb | dt | rf
const char* algorithm_name(Algorithm algo);

struct TrainingInstance {
    std::array<double, kNumFeatures> f{};
    std::uint8_t cls = 0;  // 1 iff the candidate is in the document's gold set
};

struct AssembleResult {
    std::vector<TrainingInstance> instances;
    std::size_t skipped_docs = 0;  // documents with no usable terms
};

// One instance per (training document, candidate label), candidates drawn
// from the document's k nearest neighbors with the document itself excluded.
AssembleResult assemble_training_set(const std::vector<Document>& train_docs,
                                     const VectorIndex& index, const LabelVocabulary& vocab,
                                     std::size_t k, unsigned threads = 1);

// Per-feature discretization: numeric features get MDL cut points, binary
// features pass through as two bins.
struct FeatureDisc {
    bool numeric = false;
    std::vector<double> cuts;
    std::uint32_t n_bins = 2;
};

std::vector<FeatureDisc> discretize_fit(const std::vector<TrainingInstance>& instances);
std::vector<std::uint32_t> discretize_apply(const std::vector<FeatureDisc>& disc,
                                            const std::array<double, kNumFeatures>& f);

// ---- learners over discretized rows ----

struct NominalDataset {
    std::vector<std::uint32_t> n_bins;             // per feature
    std::vector<std::vector<std::uint32_t>> rows;  // instance-major bin indices
    std::vector<std::uint8_t> classes;

    std::size_t n_features() const { return n_bins.size(); }
    std::size_t size() const { return rows.size(); }
};

struct NaiveBayesModel {
    std::array<double, 2> prior{};
    // cond[feature][bin] = {P(bin|class 0), P(bin|class 1)}, add-one smoothed
    std::vector<std::vector<std::array<double, 2>>> cond;

    // normalized posteriors {P(0|row), P(1|row)}
    std::array<double, 2> posteriors(const std::vector<std::uint32_t>& row) const;
};

NaiveBayesModel train_naive_bayes(const NominalDataset& data);

struct TreeNode {
    std::int32_t feature = -1;       // -1 marks a leaf
    std::uint32_t first_child = 0;   // children contiguous, one per bin
    std::uint64_t pos = 0;
    std::uint64_t total = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    // Laplace-corrected probability (pos+1)/(total+2) at the deepest node
    // reached that still holds training instances.
    double score(const std::vector<std::uint32_t>& row) const;
};

// Information-gain tree over nominal features, multiway splits, stopping on
// purity or no positive gain. A null rng (or a subset covering all features)
// considers every remaining feature, which is the plain decision tree.
Tree build_tree(const NominalDataset& data, const std::vector<std::uint32_t>& sample,
                std::uint32_t feature_subset, std::mt19937_64* rng);

struct RandomForestOptions {
    std::uint32_t n_trees = 100;
    std::uint32_t feature_subset = 3;  // ceil(sqrt(6))
    bool bootstrap = true;
};

struct RankerModel {
    Algorithm algo = Algorithm::naive_bayes;
    std::uint64_t seed = 0;
    std::uint32_t k = 25;
    std::vector<FeatureDisc> features;
    NaiveBayesModel nb;
    std::vector<Tree> trees;
    RandomForestOptions rf;

    bool trained() const;
    // relevance = P(class = 1 | features) in [0, 1]
    double score(const std::array<double, kNumFeatures>& f) const;
    std::array<double, 2> nb_posteriors(const std::array<double, kNumFeatures>& f) const;

    void save(const std::string& path) const;
    static RankerModel load(const std::string& path);
};

RankerModel train(const std::vector<TrainingInstance>& instances, Algorithm algo,
                  std::uint64_t seed, std::uint32_t k, const RandomForestOptions& rf = {},
                  unsigned threads = 1);

// Scores every candidate with the model and returns them ranked
// (relevance desc, label asc). Candidate features must be populated.
RankedLabels score_candidates(const RankerModel& model, std::vector<CandidateLabel>& candidates);

}  // namespace mlabel
