#pragma once

#include <cstdint>
#include <vector>

#include "mlabel/corpus.hpp"

namespace mlabel {

// Planted-topic corpus generator. Each topic owns a disjoint signature of
// sig_len terms; every document samples min_topics..max_topics topics, emits
// each sampled signature in full plus uniform noise, and is gold-labeled
// with exactly its topics. The first topic's signature becomes the title and
// signature terms stay pairwise adjacent in the abstract, so the lexical
// features have signal for topics with signature-derived vocabulary names.
// Only every fifth topic gets such a name; the rest carry opaque names that
// never occur in documents, which keeps the neighbor-vote features dominant
// the way they are on real descriptor vocabularies.
struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t topics = 50;
    std::size_t sig_len = 5;
    std::size_t train_docs = 2000;
    std::size_t test_docs = 500;
    std::size_t noise_vocab = 120;
    std::size_t min_topics = 2;
    std::size_t max_topics = 4;
    std::size_t min_tokens = 30;
    std::size_t max_tokens = 60;
    std::size_t named_every = 5;  // topic t gets a signature-derived name iff t % named_every == 0
    double topic_skew = 1.2;      // topic t drawn with weight 1/(t+1)^skew, like real label skew
    // share of noise tokens drawn from the signature vocabulary of unsampled
    // topics; stray topic terms without the label blur the neighborhoods the
    // way incidental mentions do in real abstracts
    double sig_noise_share = 0.3;
    // topics come in contiguous clusters of cluster_size; after the first
    // draw, further topics stay inside an already-sampled cluster with
    // probability cluster_affinity. Correlated sibling labels are what make
    // fixed-threshold selection conservative on real descriptor data.
    std::size_t cluster_size = 5;
    double cluster_affinity = 0.7;
};

struct SynthData {
    std::vector<Document> train;
    std::vector<Document> test;
    LabelVocabulary vocab;
};

SynthData generate_planted(const SynthConfig& cfg);

// Uniform random documents for scale tests: tokens_per_doc draws from a
// vocab_size term pool, no labels.
std::vector<Document> generate_uniform(std::uint64_t seed, std::size_t n_docs,
                                       std::size_t tokens_per_doc, std::size_t vocab_size);

}  // namespace mlabel
