#include "mlabel/esa.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mlabel/common.hpp"
#include "mlabel/io.hpp"
#include "mlabel/simd/kernels.hpp"

namespace mlabel {

namespace {
constexpr char kAssocMagic[8] = {'M', 'L', 'B', 'E', 'S', 'A', '0', '\0'};
constexpr std::uint32_t kAssocVersion = 1;
}  // namespace

Measure parse_measure(const std::string& name) {
    if (name == "jaccard") return Measure::jaccard;
    if (name == "tficf") return Measure::tf_icf;
    throw error("unknown association measure \"" + name + "\" (expected jaccard or tficf)");
}

const char* measure_name(Measure m) {
    switch (m) {
        case Measure::jaccard: return "jaccard";
        case Measure::tf_icf: return "tficf";
    }
    return "?";
}

namespace {

// Raw per-collection counts shared by the bulk build and the single-pair ops.
struct Scan {
    std::uint64_t n_docs = 0;
    std::map<std::string, std::uint32_t> df;          // docs containing the term
    std::map<std::string, std::uint32_t> occ_c;       // docs annotated by the concept
    // per concept: per term, docs where both co-occur and the length-
    // normalized frequency mass
    std::map<std::string, std::map<std::string, std::uint32_t>> cocc;
    std::map<std::string, std::map<std::string, double>> tf_sum;
    std::map<std::string, std::uint32_t> n_assoc;     // concepts co-occurring with the term

    static Scan run(const std::vector<Document>& collection) {
        Scan s;
        s.n_docs = collection.size();
        bool any_labeled = false;
        for (const auto& doc : collection) {
            const auto counts = term_vector(doc);
            std::uint64_t len = 0;
            for (const auto& [t, c] : counts) len += c;
            for (const auto& [t, c] : counts) ++s.df[t];
            if (doc.labels.empty() || len == 0) continue;
            any_labeled = true;
            for (const auto& concept_id : doc.labels) {
                ++s.occ_c[concept_id];
                auto& co = s.cocc[concept_id];
                auto& tf = s.tf_sum[concept_id];
                for (const auto& [t, c] : counts) {
                    ++co[t];
                    tf[t] += static_cast<double>(c) / static_cast<double>(len);
                }
            }
        }
        if (!any_labeled) throw error("collection has no labeled documents");
        for (const auto& [concept_id, terms] : s.cocc)
            for (const auto& [t, c] : terms) ++s.n_assoc[t];
        return s;
    }

    double pair_score(Measure measure, const std::string& term, const std::string& concept_id) const {
        const auto co_it = cocc.find(concept_id);
        const std::uint32_t co =
            co_it == cocc.end() ? 0
                                : (co_it->second.count(term) ? co_it->second.at(term) : 0);
        if (measure == Measure::jaccard) {
            const std::uint32_t ot = df.count(term) ? df.at(term) : 0;
            const std::uint32_t oc = occ_c.count(concept_id) ? occ_c.at(concept_id) : 0;
            if (ot == 0 && oc == 0)
                throw error("jaccard undefined: neither \"" + term + "\" nor \"" + concept_id +
                            "\" occurs");
            if (co == 0) return 0.0;
            return static_cast<double>(co) / static_cast<double>(ot + oc - co);
        }
        // TF.ICF
        if (!df.count(term)) throw error("term \"" + term + "\" occurs in no document");
        if (co == 0) return 0.0;
        const double tf = tf_sum.at(concept_id).at(term);
        const double icf = std::log(static_cast<double>(occ_c.size()) /
                                    static_cast<double>(n_assoc.at(term)));
        return tf * icf;
    }
};

}  // namespace

double tf_icf(const std::string& term, const LabelId& concept_id,
              const std::vector<Document>& collection) {
    const Scan s = Scan::run(collection);
    if (!s.occ_c.count(concept_id)) throw error("concept \"" + concept_id + "\" annotates no document");
    return s.pair_score(Measure::tf_icf, term, concept_id);
}

double jaccard(const std::string& term, const LabelId& concept_id,
               const std::vector<Document>& collection) {
    const Scan s = Scan::run(collection);
    return s.pair_score(Measure::jaccard, term, concept_id);
}

AssociationIndex AssociationIndex::build(const std::vector<Document>& collection,
                                         const AssocOptions& opts) {
    const Scan scan = Scan::run(collection);

    AssociationIndex ix;
    ix.opts_ = opts;
    ix.n_docs_ = scan.n_docs;

    // Eligible terms: document frequency at least min_df (sorted by std::map).
    for (const auto& [term, df] : scan.df) {
        if (df >= opts.min_df) {
            ix.terms_.push_back(term);
            ix.term_df_.push_back(df);
        }
    }
    std::unordered_map<std::string, std::uint32_t> term_ix;
    for (std::uint32_t i = 0; i < ix.terms_.size(); ++i) term_ix.emplace(ix.terms_[i], i);

    for (const auto& [concept_id, occ] : scan.occ_c) ix.concepts_.push_back(concept_id);

    const double n_concepts = static_cast<double>(ix.concepts_.size());
    ix.concept_vectors_.resize(ix.concepts_.size());
    for (std::size_t c = 0; c < ix.concepts_.size(); ++c) {
        const auto& concept_id = ix.concepts_[c];
        const auto& co = scan.cocc.at(concept_id);
        std::vector<TermScore> scored;
        scored.reserve(co.size());
        for (const auto& [term, cocc] : co) {
            auto it = term_ix.find(term);
            if (it == term_ix.end()) continue;  // below min_df
            double score;
            if (opts.measure == Measure::jaccard) {
                score = static_cast<double>(cocc) /
                        static_cast<double>(scan.df.at(term) + scan.occ_c.at(concept_id) - cocc);
            } else {
                score = scan.tf_sum.at(concept_id).at(term) *
                        std::log(n_concepts / static_cast<double>(scan.n_assoc.at(term)));
            }
            if (score > 0.0) scored.push_back({it->second, score});
        }
        std::sort(scored.begin(), scored.end(), [](const TermScore& a, const TermScore& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.term < b.term;
        });
        if (scored.size() > opts.cap) scored.resize(opts.cap);
        ix.concept_vectors_[c] = std::move(scored);
    }

    ix.build_inverted();
    ix.rebuild_lookup();
    return ix;
}

void AssociationIndex::build_inverted() {
    inverted_.assign(terms_.size(), {});
    for (std::uint32_t c = 0; c < concept_vectors_.size(); ++c)
        for (const auto& ts : concept_vectors_[c]) inverted_[ts.term].push_back({c, ts.score});
    // concept ids ascend because c ascends; nothing further to sort
}

void AssociationIndex::rebuild_lookup() {
    term_ix_.clear();
    concept_ix_.clear();
    for (std::uint32_t i = 0; i < terms_.size(); ++i) term_ix_.emplace(terms_[i], i);
    for (std::uint32_t i = 0; i < concepts_.size(); ++i) concept_ix_.emplace(concepts_[i], i);
}

std::uint32_t AssociationIndex::term_df(const std::string& term) const {
    auto it = term_ix_.find(term);
    if (it == term_ix_.end()) throw error("term not in association index: " + term);
    return term_df_[it->second];
}

const std::vector<AssociationIndex::TermScore>& AssociationIndex::concept_vector(
    const LabelId& concept_id) const {
    auto it = concept_ix_.find(concept_id);
    if (it == concept_ix_.end()) throw error("unknown concept_id: " + concept_id);
    return concept_vectors_[it->second];
}

const std::vector<AssociationIndex::ConceptScore>& AssociationIndex::inverted(
    const std::string& term) const {
    auto it = term_ix_.find(term);
    if (it == term_ix_.end()) throw error("term not in association index: " + term);
    return inverted_[it->second];
}

double AssociationIndex::score(const std::string& term, const LabelId& concept_id) const {
    auto t = term_ix_.find(term);
    auto c = concept_ix_.find(concept_id);
    if (t == term_ix_.end() || c == concept_ix_.end()) return 0.0;
    const auto& list = inverted_[t->second];
    auto it = std::lower_bound(list.begin(), list.end(), c->second,
                               [](const ConceptScore& cs, std::uint32_t ix) { return cs.concept_id < ix; });
    if (it == list.end() || it->concept_id != c->second) return 0.0;
    return it->score;
}

double AssociationIndex::relevance(const LabelId& concept_id, const Document& doc) const {
    auto c = concept_ix_.find(concept_id);
    if (c == concept_ix_.end()) throw error("unknown concept_id: " + concept_id);
    double rel = 0.0;
    for (const auto& [term, count] : term_vector(doc)) {
        auto t = term_ix_.find(term);
        if (t == term_ix_.end()) continue;
        const double w = static_cast<double>(count) *
                         std::log(static_cast<double>(n_docs_) / static_cast<double>(term_df_[t->second]));
        const auto& list = inverted_[t->second];
        auto it = std::lower_bound(list.begin(), list.end(), c->second,
                                   [](const ConceptScore& cs, std::uint32_t ix) { return cs.concept_id < ix; });
        if (it != list.end() && it->concept_id == c->second) rel += w * it->score;
    }
    return rel;
}

RankedLabels AssociationIndex::classify(const Document& doc, std::size_t n_labels) const {
    if (n_labels == 0) throw error("n_labels must be >= 1");
    const auto counts = term_vector(doc);
    if (counts.empty()) throw error("unclassifiable document \"" + doc.id +
                                    "\": no terms left after preprocessing");

    const auto& kr = simd::active();
    std::vector<double> acc(concepts_.size(), 0.0);
    std::vector<std::uint8_t> reachable(concepts_.size(), 0);
    std::vector<std::uint32_t> ids;
    std::vector<double> scores;
    for (const auto& [term, count] : counts) {
        auto t = term_ix_.find(term);
        if (t == term_ix_.end()) continue;
        const auto& list = inverted_[t->second];
        if (list.empty()) continue;
        const double w = static_cast<double>(count) *
                         std::log(static_cast<double>(n_docs_) / static_cast<double>(term_df_[t->second]));
        ids.resize(list.size());
        scores.resize(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            ids[i] = list[i].concept_id;
            scores[i] = list[i].score;
            reachable[list[i].concept_id] = 1;
        }
        kr.scatter_add_f64(acc.data(), ids.data(), scores.data(), w, list.size());
    }

    std::vector<std::uint32_t> candidates;
    for (std::uint32_t c = 0; c < reachable.size(); ++c)
        if (reachable[c]) candidates.push_back(c);
    if (candidates.empty()) {
        log_warn("document \"" + doc.id + "\": no reachable concept, empty prediction");
        return {};
    }

    auto better = [&](std::uint32_t a, std::uint32_t b) {
        if (acc[a] != acc[b]) return acc[a] > acc[b];
        return concepts_[a] < concepts_[b];
    };
    if (candidates.size() > n_labels) {
        std::nth_element(candidates.begin(),
                         candidates.begin() + static_cast<std::ptrdiff_t>(n_labels),
                         candidates.end(), better);
        candidates.resize(n_labels);
    }
    std::sort(candidates.begin(), candidates.end(), better);

    RankedLabels out;
    out.reserve(candidates.size());
    for (auto c : candidates) out.emplace_back(concepts_[c], acc[c]);
    return out;
}

void AssociationIndex::save(const std::string& path) const {
    BinWriter w(path);
    w.magic(kAssocMagic, kAssocVersion);
    w.u8(static_cast<std::uint8_t>(opts_.measure));
    w.u32(opts_.min_df);
    w.u32(opts_.cap);
    w.u64(n_docs_);
    w.str_vec(terms_);
    for (auto df : term_df_) w.u32(df);
    w.str_vec(concepts_);
    for (const auto& vec : concept_vectors_) {
        w.u32(static_cast<std::uint32_t>(vec.size()));
        for (const auto& ts : vec) {
            w.u32(ts.term);
            w.f64(ts.score);
        }
    }
    w.close();
}

AssociationIndex AssociationIndex::load(const std::string& path) {
    BinReader r(path);
    r.expect_magic(kAssocMagic, kAssocVersion);
    AssociationIndex ix;
    const std::uint8_t measure_raw = r.u8();
    if (measure_raw > 1) throw error("corrupt association file: " + path);
    ix.opts_.measure = static_cast<Measure>(measure_raw);
    ix.opts_.min_df = r.u32();
    ix.opts_.cap = r.u32();
    ix.n_docs_ = r.u64();
    ix.terms_ = r.str_vec();
    ix.term_df_.resize(ix.terms_.size());
    for (auto& df : ix.term_df_) df = r.u32();
    ix.concepts_ = r.str_vec();
    ix.concept_vectors_.resize(ix.concepts_.size());
    for (auto& vec : ix.concept_vectors_) {
        vec.resize(r.u32());
        for (auto& ts : vec) {
            ts.term = r.u32();
            if (ts.term >= ix.terms_.size()) throw error("corrupt association file: " + path);
            ts.score = r.f64();
        }
    }
    ix.build_inverted();
    ix.rebuild_lookup();
    return ix;
}

}  // namespace mlabel
