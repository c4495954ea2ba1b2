#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlabel/corpus.hpp"
#include "mlabel/ranker.hpp"

namespace mlabel {

enum class Measure : std::uint8_t { jaccard = 0, tf_icf = 1 };

Measure parse_measure(const std::string& name);  // jaccard | tficf
const char* measure_name(Measure m);

struct AssocOptions {
    Measure measure = Measure::jaccard;
    std::uint32_t min_df = 5;  // a term must appear in at least this many documents
    std::uint32_t cap = 200;   // concept vectors keep their top-scoring terms only
};

// Pruned term<->concept association index plus the collection statistics
// needed to TF.IDF-weight query documents. Immutable once built.
class AssociationIndex {
public:
    struct TermScore {
        std::uint32_t term;
        double score;
    };
    struct ConceptScore {
        std::uint32_t concept_id;
        double score;
    };

    static AssociationIndex build(const std::vector<Document>& collection,
                                  const AssocOptions& opts);

    static AssociationIndex load(const std::string& path);
    void save(const std::string& path) const;

    Measure measure() const { return opts_.measure; }
    const AssocOptions& options() const { return opts_; }
    std::uint64_t n_docs() const { return n_docs_; }
    std::size_t n_concepts() const { return concepts_.size(); }
    std::size_t n_terms() const { return terms_.size(); }

    const std::vector<std::string>& concepts() const { return concepts_; }
    const std::vector<std::string>& terms() const { return terms_; }
    std::uint32_t term_df(const std::string& term) const;
    bool has_term(const std::string& term) const { return term_ix_.count(term) != 0; }

    // (term, score) pairs, scores non-increasing, ties by ascending term.
    const std::vector<TermScore>& concept_vector(const LabelId& concept_id) const;
    // (concept, score) pairs in ascending concept order.
    const std::vector<ConceptScore>& inverted(const std::string& term) const;

    // Retained association score, 0 when the pair was pruned or never scored.
    double score(const std::string& term, const LabelId& concept_id) const;

    // Rel(c, d): sum over the document's distinct terms of the term's TF.IDF
    // weight under this collection's statistics times the retained score.
    double relevance(const LabelId& concept_id, const Document& doc) const;

    // Concepts reachable from the document's terms through the inverted map,
    // ranked by relevance (ties by ascending concept id), top n_labels.
    RankedLabels classify(const Document& doc, std::size_t n_labels) const;

private:
    AssocOptions opts_;
    std::uint64_t n_docs_ = 0;
    std::vector<std::string> concepts_;                   // sorted
    std::vector<std::vector<TermScore>> concept_vectors_; // parallel to concepts_
    std::vector<std::string> terms_;                      // sorted, eligible terms
    std::vector<std::uint32_t> term_df_;                  // parallel to terms_
    std::vector<std::vector<ConceptScore>> inverted_;     // parallel to terms_
    std::unordered_map<std::string, std::uint32_t> term_ix_;
    std::unordered_map<std::string, std::uint32_t> concept_ix_;

    void build_inverted();
    void rebuild_lookup();
};

// Association scores computed directly from a collection scan; these are the
// single-pair reference operations, build() computes the same quantities in
// bulk.
double tf_icf(const std::string& term, const LabelId& concept_id,
              const std::vector<Document>& collection);
double jaccard(const std::string& term, const LabelId& concept_id,
               const std::vector<Document>& collection);

}  // namespace mlabel
