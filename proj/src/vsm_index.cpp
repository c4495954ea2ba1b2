#include "mlabel/vsm_index.hpp"

#include <algorithm>
#include <cmath>

#include "mlabel/io.hpp"
#include "mlabel/simd/kernels.hpp"

namespace mlabel {

namespace {
constexpr char kIndexMagic[8] = {'M', 'L', 'B', 'I', 'D', 'X', '0', '\0'};
constexpr std::uint32_t kIndexVersion = 1;
}  // namespace

VectorIndex VectorIndex::build(const std::vector<Document>& collection) {
    if (collection.empty()) throw error("cannot build an index over an empty collection");

    VectorIndex ix;
    ix.doc_ids_.reserve(collection.size());
    ix.labels_.reserve(collection.size());

    // Pass 1: per-document term counts with insertion-order term interning.
    std::unordered_map<std::string, std::uint32_t> intern;
    std::vector<std::string> terms_in_order;
    struct DocTerm {
        std::uint32_t term;
        float tf;
    };
    std::vector<std::vector<DocTerm>> doc_terms(collection.size());

    for (std::size_t d = 0; d < collection.size(); ++d) {
        const Document& doc = collection[d];
        if (doc.id.empty()) throw error("document with empty id in collection");
        if (!ix.doc_ix_.emplace(doc.id, static_cast<std::uint32_t>(d)).second)
            throw error("duplicate document id in collection: " + doc.id);
        ix.doc_ids_.push_back(doc.id);
        ix.labels_.push_back(doc.labels);
        for (const auto& [term, count] : term_vector(doc)) {
            auto [it, inserted] = intern.emplace(term, static_cast<std::uint32_t>(terms_in_order.size()));
            if (inserted) terms_in_order.push_back(term);
            doc_terms[d].push_back({it->second, static_cast<float>(count)});
        }
    }

    // Remap interned ids onto the sorted term order.
    std::vector<std::uint32_t> order(terms_in_order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return terms_in_order[a] < terms_in_order[b];
    });
    std::vector<std::uint32_t> remap(terms_in_order.size());
    ix.terms_.resize(terms_in_order.size());
    for (std::uint32_t new_ix = 0; new_ix < order.size(); ++new_ix) {
        remap[order[new_ix]] = new_ix;
        ix.terms_[new_ix] = terms_in_order[order[new_ix]];
    }

    ix.postings_.resize(ix.terms_.size());
    for (std::size_t d = 0; d < doc_terms.size(); ++d) {
        for (auto& dt : doc_terms[d]) {
            dt.term = remap[dt.term];
            auto& post = ix.postings_[dt.term];
            post.doc.push_back(static_cast<std::uint32_t>(d));
            post.tf.push_back(dt.tf);
        }
        // keep per-doc terms in sorted-term order for the norm accumulation
        std::sort(doc_terms[d].begin(), doc_terms[d].end(),
                  [](const DocTerm& a, const DocTerm& b) { return a.term < b.term; });
    }

    const double n = static_cast<double>(collection.size());
    ix.doc_freq_.resize(ix.terms_.size());
    ix.idf_.resize(ix.terms_.size());
    for (std::size_t t = 0; t < ix.terms_.size(); ++t) {
        ix.doc_freq_[t] = static_cast<std::uint32_t>(ix.postings_[t].doc.size());
        ix.idf_[t] = std::log(n / static_cast<double>(ix.doc_freq_[t]));
    }

    const auto& k = simd::active();
    ix.norms_.resize(collection.size(), 0.0);
    std::vector<float> tf_buf;
    std::vector<double> idf_buf, w_buf;
    for (std::size_t d = 0; d < doc_terms.size(); ++d) {
        const auto& dts = doc_terms[d];
        if (dts.empty()) continue;
        tf_buf.resize(dts.size());
        idf_buf.resize(dts.size());
        w_buf.resize(dts.size());
        for (std::size_t i = 0; i < dts.size(); ++i) {
            tf_buf[i] = dts[i].tf;
            idf_buf[i] = ix.idf_[dts[i].term];
        }
        k.mul_f32_f64(w_buf.data(), tf_buf.data(), idf_buf.data(), dts.size());
        ix.norms_[d] = std::sqrt(k.sum_squares(w_buf.data(), dts.size()));
    }

    for (const auto& t : ix.terms_) ix.term_ix_.emplace(t, ix.term_ix_.size());
    return ix;
}

void VectorIndex::rebuild_lookup() {
    term_ix_.clear();
    doc_ix_.clear();
    for (std::size_t t = 0; t < terms_.size(); ++t)
        term_ix_.emplace(terms_[t], static_cast<std::uint32_t>(t));
    for (std::size_t d = 0; d < doc_ids_.size(); ++d)
        doc_ix_.emplace(doc_ids_[d], static_cast<std::uint32_t>(d));
}

bool VectorIndex::has_term(const std::string& term) const { return term_ix_.count(term) != 0; }
bool VectorIndex::has_doc(const std::string& doc_id) const { return doc_ix_.count(doc_id) != 0; }

std::uint32_t VectorIndex::doc_freq(const std::string& term) const {
    auto it = term_ix_.find(term);
    if (it == term_ix_.end()) throw error("unknown term: " + term);
    return doc_freq_[it->second];
}

double VectorIndex::idf(const std::string& term) const {
    auto it = term_ix_.find(term);
    if (it == term_ix_.end()) throw error("unknown term: " + term);
    return idf_[it->second];
}

const LabelSet& VectorIndex::doc_labels(const std::string& doc_id) const {
    auto it = doc_ix_.find(doc_id);
    if (it == doc_ix_.end()) throw error("unknown document: " + doc_id);
    return labels_[it->second];
}

double VectorIndex::doc_norm(const std::string& doc_id) const {
    auto it = doc_ix_.find(doc_id);
    if (it == doc_ix_.end()) throw error("unknown document: " + doc_id);
    return norms_[it->second];
}

double VectorIndex::tfidf_weight(const std::string& term, const std::string& doc_id) const {
    auto t = term_ix_.find(term);
    if (t == term_ix_.end()) throw error("unknown term: " + term);
    auto d = doc_ix_.find(doc_id);
    if (d == doc_ix_.end()) throw error("unknown document: " + doc_id);
    const Posting& post = postings_[t->second];
    auto lo = std::lower_bound(post.doc.begin(), post.doc.end(), d->second);
    if (lo == post.doc.end() || *lo != d->second)
        throw error("term \"" + term + "\" does not occur in document \"" + doc_id + "\"");
    const float tf = post.tf[static_cast<std::size_t>(lo - post.doc.begin())];
    return static_cast<double>(tf) * idf_[t->second];
}

std::map<std::string, double> VectorIndex::query_weights(const Document& query) const {
    std::map<std::string, double> weights;
    for (const auto& [term, count] : term_vector(query)) {
        auto it = term_ix_.find(term);
        if (it == term_ix_.end()) continue;
        weights[term] = static_cast<double>(count) * idf_[it->second];
    }
    return weights;
}

std::vector<Neighbor> VectorIndex::top_k(const Document& query, std::size_t k,
                                         bool exclude_self) const {
    if (k == 0) throw error("k must be >= 1");
    const auto counts = term_vector(query);
    if (counts.empty()) throw error("unclassifiable document \"" + query.id +
                                    "\": no terms left after preprocessing");

    const auto& kr = simd::active();

    // Query weights and norm over terms known to the index.
    std::vector<const Posting*> posts;
    std::vector<double> coeff;       // per query term: q_tf * idf^2
    std::vector<float> q_tf;
    std::vector<double> q_idf;
    for (const auto& [term, count] : counts) {
        auto it = term_ix_.find(term);
        if (it == term_ix_.end()) continue;
        const double idf = idf_[it->second];
        if (idf == 0.0) continue;  // term in every document, no discrimination
        q_tf.push_back(static_cast<float>(count));
        q_idf.push_back(idf);
        posts.push_back(&postings_[it->second]);
        coeff.push_back(static_cast<double>(count) * idf * idf);
    }
    if (posts.empty())
        throw error("unclassifiable document \"" + query.id +
                    "\": no indexed terms with nonzero weight");

    std::vector<double> q_w(q_tf.size());
    kr.mul_f32_f64(q_w.data(), q_tf.data(), q_idf.data(), q_tf.size());
    const double q_norm = std::sqrt(kr.sum_squares(q_w.data(), q_w.size()));

    // Accumulate dot products against every posting of every query term.
    std::vector<double> acc(doc_ids_.size(), 0.0);
    for (std::size_t i = 0; i < posts.size(); ++i)
        kr.scatter_add_f32(acc.data(), posts[i]->doc.data(), posts[i]->tf.data(), coeff[i],
                           posts[i]->doc.size());

    const std::uint32_t self =
        exclude_self && doc_ix_.count(query.id) ? doc_ix_.at(query.id) : UINT32_MAX;

    std::vector<std::pair<double, std::uint32_t>> scored;  // (score, ordinal)
    scored.reserve(256);
    for (std::uint32_t d = 0; d < acc.size(); ++d) {
        if (d == self || acc[d] == 0.0) continue;
        double s = acc[d] / (q_norm * norms_[d]);
        if (s > 1.0) s = 1.0;
        scored.emplace_back(s, d);
    }

    auto better = [&](const std::pair<double, std::uint32_t>& a,
                      const std::pair<double, std::uint32_t>& b) {
        if (a.first != b.first) return a.first > b.first;
        return doc_ids_[a.second] < doc_ids_[b.second];
    };
    if (scored.size() > k) {
        std::nth_element(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                         scored.end(), better);
        scored.resize(k);
    }
    std::sort(scored.begin(), scored.end(), better);

    if (scored.size() < k) {
        // Documents sharing no weighted term with the query score 0; when k
        // exceeds the overlap they fill the tail in ascending-id order.
        // Zero-norm documents have no comparable vector and stay out.
        std::vector<std::uint32_t> zeros;
        for (std::uint32_t d = 0; d < acc.size(); ++d)
            if (d != self && acc[d] == 0.0 && norms_[d] > 0.0) zeros.push_back(d);
        std::sort(zeros.begin(), zeros.end(), [&](std::uint32_t a, std::uint32_t b) {
            return doc_ids_[a] < doc_ids_[b];
        });
        for (std::uint32_t d : zeros) {
            if (scored.size() >= k) break;
            scored.emplace_back(0.0, d);
        }
    }

    std::vector<Neighbor> out;
    out.reserve(scored.size());
    for (const auto& [score, d] : scored)
        out.push_back(Neighbor{doc_ids_[d], score, labels_[d]});
    return out;
}

double cosine(const std::map<std::string, double>& v1, const std::map<std::string, double>& v2) {
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (const auto& [t, w] : v1) n1 += w * w;
    for (const auto& [t, w] : v2) n2 += w * w;
    if (n1 == 0.0 && n2 == 0.0) throw error("cosine of two zero vectors is undefined");
    if (n1 == 0.0 || n2 == 0.0) return 0.0;
    auto i1 = v1.begin();
    auto i2 = v2.begin();
    while (i1 != v1.end() && i2 != v2.end()) {
        if (i1->first < i2->first) {
            ++i1;
        } else if (i2->first < i1->first) {
            ++i2;
        } else {
            dot += i1->second * i2->second;
            ++i1;
            ++i2;
        }
    }
    double s = dot / (std::sqrt(n1) * std::sqrt(n2));
    if (s > 1.0) s = 1.0;
    if (s < 0.0) s = 0.0;
    return s;
}

void VectorIndex::save(const std::string& path) const {
    BinWriter w(path);
    w.magic(kIndexMagic, kIndexVersion);
    w.u64(doc_ids_.size());
    for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
        w.str(doc_ids_[d]);
        w.f64(norms_[d]);
        w.str_vec(labels_[d]);
    }
    w.u64(terms_.size());
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        w.str(terms_[t]);
        const Posting& p = postings_[t];
        w.u32(static_cast<std::uint32_t>(p.doc.size()));
        for (std::size_t i = 0; i < p.doc.size(); ++i) {
            w.u32(p.doc[i]);
            w.f32(p.tf[i]);
        }
    }
    w.close();
}

VectorIndex VectorIndex::load(const std::string& path) {
    BinReader r(path);
    r.expect_magic(kIndexMagic, kIndexVersion);
    VectorIndex ix;
    const std::uint64_t n_docs = r.u64();
    ix.doc_ids_.reserve(n_docs);
    ix.norms_.reserve(n_docs);
    ix.labels_.reserve(n_docs);
    for (std::uint64_t d = 0; d < n_docs; ++d) {
        ix.doc_ids_.push_back(r.str());
        ix.norms_.push_back(r.f64());
        ix.labels_.push_back(r.str_vec());
    }
    const std::uint64_t n_terms = r.u64();
    ix.terms_.reserve(n_terms);
    ix.postings_.resize(n_terms);
    ix.doc_freq_.resize(n_terms);
    ix.idf_.resize(n_terms);
    for (std::uint64_t t = 0; t < n_terms; ++t) {
        ix.terms_.push_back(r.str());
        const std::uint32_t len = r.u32();
        Posting& p = ix.postings_[t];
        p.doc.resize(len);
        p.tf.resize(len);
        for (std::uint32_t i = 0; i < len; ++i) {
            p.doc[i] = r.u32();
            if (p.doc[i] >= n_docs) throw error("corrupt index file: " + path);
            p.tf[i] = r.f32();
        }
        ix.doc_freq_[t] = len;
        ix.idf_[t] = std::log(static_cast<double>(n_docs) / static_cast<double>(len));
    }
    ix.rebuild_lookup();
    return ix;
}

}  // namespace mlabel
