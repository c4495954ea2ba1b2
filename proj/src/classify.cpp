#include "mlabel/classify.hpp"

#include <fstream>

#include <json.hpp>

#include "mlabel/common.hpp"

namespace mlabel {

using nlohmann::json;

Prediction classify(const Document& doc, const RankerModel& model, const VectorIndex& index,
                    const LabelVocabulary& vocab, const ClassifyOptions& opts) {
    Prediction pred;
    pred.id = doc.id;

    const auto neighbors = index.top_k(doc, opts.k, opts.exclude_self);
    if (neighbors.empty()) {
        log_warn("document \"" + doc.id + "\": no neighbors, empty prediction");
        return pred;
    }
    auto candidates = extract_candidates(doc, neighbors, opts.k, vocab);
    if (candidates.empty()) {
        log_warn("document \"" + doc.id + "\": neighbors carry no labels, empty prediction");
        return pred;
    }
    pred.ranked = score_candidates(model, candidates);
    switch (opts.strategy) {
        case Strategy::threshold: pred.labels = select_threshold(pred.ranked, opts.tau); break;
        case Strategy::avgsize: pred.labels = select_average_size(pred.ranked, neighbors); break;
        case Strategy::cutoff: pred.labels = select_cutoff(pred.ranked, opts.alpha); break;
    }
    return pred;
}

std::vector<Prediction> classify_all(const std::vector<Document>& docs, const RankerModel& model,
                                     const VectorIndex& index, const LabelVocabulary& vocab,
                                     const ClassifyOptions& opts, unsigned threads) {
    std::vector<Prediction> preds(docs.size());
    parallel_for(docs.size(), threads,
                 [&](std::size_t i) { preds[i] = classify(docs[i], model, index, vocab, opts); });
    return preds;
}

void save_predictions(const std::vector<Prediction>& preds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write predictions file: " + path);
    for (const auto& p : preds) {
        json rec;
        rec["id"] = p.id;
        rec["labels"] = p.labels;
        json ranked = json::array();
        for (const auto& [label, score] : p.ranked) ranked.push_back(json::array({label, score}));
        rec["ranked"] = std::move(ranked);
        out << rec.dump() << "\n";
    }
    if (!out) throw error("write failed: " + path);
}

std::vector<Prediction> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open predictions file: " + path);
    std::vector<Prediction> preds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw error("malformed prediction line " + std::to_string(line_no) + ": " + e.what());
        }
        Prediction p;
        p.id = rec.at("id").get<std::string>();
        if (rec.contains("labels"))
            p.labels = make_label_set(rec["labels"].get<std::vector<std::string>>());
        if (rec.contains("ranked"))
            for (const auto& pair : rec["ranked"])
                p.ranked.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<double>());
        preds.push_back(std::move(p));
    }
    return preds;
}

}  // namespace mlabel
