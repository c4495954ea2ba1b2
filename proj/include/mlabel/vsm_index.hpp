#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "mlabel/corpus.hpp"

namespace mlabel {

struct Neighbor {
    std::string doc_id;
    double score = 0.0;  // cosine similarity in [0, 1]
    LabelSet labels;
};

// Inverted TF.IDF index over an annotated collection. Immutable once built;
// concurrent queries are safe. Terms are held sorted so that serialization
// is deterministic and rebuilds are byte-identical.
class VectorIndex {
public:
    struct Posting {
        std::vector<std::uint32_t> doc;  // ordinals, ascending
        std::vector<float> tf;           // raw in-document counts
    };

    static VectorIndex build(const std::vector<Document>& collection);

    static VectorIndex load(const std::string& path);
    void save(const std::string& path) const;

    std::size_t n_docs() const { return doc_ids_.size(); }
    std::size_t n_terms() const { return terms_.size(); }

    // tf(term, doc) * ln(n_docs / doc_freq); error if term or doc is unknown
    // or the term does not occur in the doc.
    double tfidf_weight(const std::string& term, const std::string& doc_id) const;

    std::uint32_t doc_freq(const std::string& term) const;
    double idf(const std::string& term) const;
    bool has_term(const std::string& term) const;
    bool has_doc(const std::string& doc_id) const;

    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    const LabelSet& doc_labels(const std::string& doc_id) const;
    double doc_norm(const std::string& doc_id) const;
    const std::vector<std::string>& terms() const { return terms_; }
    const Posting& posting(std::size_t term_ix) const { return postings_[term_ix]; }

    // The k highest-cosine documents for the query, scores non-increasing,
    // ties broken by ascending doc id. Throws for queries that preprocess to
    // an empty term list or share no weighted term with the index.
    std::vector<Neighbor> top_k(const Document& query, std::size_t k, bool exclude_self) const;

    // TF.IDF weights of a query document under this index's statistics;
    // terms unknown to the index are dropped.
    std::map<std::string, double> query_weights(const Document& query) const;

private:
    std::vector<std::string> terms_;                         // sorted
    std::vector<Posting> postings_;                          // parallel to terms_
    std::vector<std::uint32_t> doc_freq_;                    // parallel to terms_
    std::vector<double> idf_;                                // parallel to terms_
    std::vector<std::string> doc_ids_;                       // ordinal -> id, input order
    std::vector<double> norms_;                              // per ordinal
    std::vector<LabelSet> labels_;                           // per ordinal
    std::unordered_map<std::string, std::uint32_t> term_ix_; // rebuilt on load
    std::unordered_map<std::string, std::uint32_t> doc_ix_;  // rebuilt on load

    void rebuild_lookup();
};

// Cosine similarity of two non-negative weighted term vectors; throws when
// both are zero. Returns 0 for disjoint supports.
double cosine(const std::map<std::string, double>& v1, const std::map<std::string, double>& v2);

}  // namespace mlabel
