#include "mlabel/features.hpp"

#include <algorithm>
#include <unordered_set>

#include "mlabel/common.hpp"

namespace mlabel {

LabelSet collect_candidates(const std::vector<Neighbor>& neighbors) {
    if (neighbors.empty()) throw error("cannot collect candidates from an empty neighbor list");
    std::vector<LabelId> all;
    for (const auto& n : neighbors) all.insert(all.end(), n.labels.begin(), n.labels.end());
    return make_label_set(std::move(all));
}

std::pair<double, double> neighbor_features(const LabelId& label,
                                            const std::vector<Neighbor>& neighbors,
                                            std::size_t k) {
    if (neighbors.empty()) throw error("neighbor_features needs at least one neighbor");
    if (k < neighbors.size()) throw error("k must be >= the neighbor list length");
    std::size_t carriers = 0;
    double sim_mass = 0.0;
    for (const auto& n : neighbors) {
        if (std::binary_search(n.labels.begin(), n.labels.end(), label)) {
            ++carriers;
            sim_mass += n.score;
        }
    }
    const double kd = static_cast<double>(k);
    return {static_cast<double>(carriers) / kd, sim_mass / kd};
}

std::size_t count_contiguous(const TermList& haystack, const TermList& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return 0;
    std::size_t count = 0;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i)))
            ++count;
    }
    return count;
}

std::array<double, 4> lexical_features(const LabelId& label, const TermList& doc_terms,
                                       const TermList& title_terms,
                                       const LabelVocabulary& vocab) {
    const VocabEntry& entry = vocab.at(label);

    // f3: bag containment of the name tokens, per the disjoint-terms reading.
    std::unordered_set<std::string> doc_set(doc_terms.begin(), doc_terms.end());
    bool all_tokens = !entry.name_terms.empty();
    for (const auto& t : entry.name_terms) {
        if (!doc_set.count(t)) {
            all_tokens = false;
            break;
        }
    }

    // f4/f5: contiguous matches of the name or any entry term.
    std::size_t matches = count_contiguous(doc_terms, entry.name_terms);
    for (const auto& et : entry.entry_terms) matches += count_contiguous(doc_terms, et);

    const bool in_title = count_contiguous(title_terms, entry.name_terms) > 0;

    return {all_tokens ? 1.0 : 0.0, matches > 0 ? 1.0 : 0.0, static_cast<double>(matches),
            in_title ? 1.0 : 0.0};
}

std::array<double, 4> lexical_features(const LabelId& label, const Document& doc,
                                       const LabelVocabulary& vocab) {
    return lexical_features(label, preprocess(doc.title + " " + doc.abstract_text),
                            preprocess(doc.title), vocab);
}

std::vector<CandidateLabel> extract_candidates(const Document& doc,
                                               const std::vector<Neighbor>& neighbors,
                                               std::size_t k, const LabelVocabulary& vocab) {
    const LabelSet candidates = collect_candidates(neighbors);
    const TermList doc_terms = preprocess(doc.title + " " + doc.abstract_text);
    const TermList title_terms = preprocess(doc.title);

    std::vector<CandidateLabel> out;
    out.reserve(candidates.size());
    for (const auto& label : candidates) {
        CandidateLabel c;
        c.label = label;
        const auto [f1, f2] = neighbor_features(label, neighbors, k);
        const auto lex = lexical_features(label, doc_terms, title_terms, vocab);
        c.f = {f1, f2, lex[0], lex[1], lex[2], lex[3]};
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace mlabel
