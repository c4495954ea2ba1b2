#include "mlabel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "mlabel/common.hpp"

namespace mlabel {

ExampleMetrics example_metrics(const LabelSet& gold, const LabelSet& predicted) {
    if (gold.empty()) throw error("example_metrics needs a non-empty gold set");
    std::vector<LabelId> inter;
    std::set_intersection(gold.begin(), gold.end(), predicted.begin(), predicted.end(),
                          std::back_inserter(inter));
    const double i = static_cast<double>(inter.size());
    const double y = static_cast<double>(gold.size());
    const double z = static_cast<double>(predicted.size());
    ExampleMetrics m;
    m.ebp = predicted.empty() ? 0.0 : i / z;
    m.ebr = i / y;
    m.ebf = 2.0 * i / (y + z);
    m.acc = i / (y + z - i);  // |Y ∪ Z| = |Y| + |Z| - |Y ∩ Z|
    return m;
}

MetricReport aggregate(const std::vector<ExampleMetrics>& per_doc) {
    if (per_doc.empty()) throw error("cannot aggregate zero documents");
    MetricReport r;
    for (const auto& m : per_doc) {
        r.ebp += m.ebp;
        r.ebr += m.ebr;
        r.ebf += m.ebf;
        r.acc += m.acc;
    }
    const double n = static_cast<double>(per_doc.size());
    r.ebp /= n;
    r.ebr /= n;
    r.ebf /= n;
    r.acc /= n;
    r.m = per_doc.size();
    return r;
}

namespace {

double entropy_bits(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

double information_gain(const std::vector<std::uint32_t>& feature_column,
                        const std::vector<std::uint8_t>& class_column) {
    if (feature_column.size() != class_column.size())
        throw error("information_gain: column lengths differ");
    if (feature_column.size() < 2) throw error("information_gain needs at least two rows");

    const std::uint64_t n = feature_column.size();
    std::vector<std::uint64_t> class_counts(2, 0);
    for (auto c : class_column) ++class_counts[c ? 1 : 0];
    const double h_class = entropy_bits(class_counts, n);

    std::map<std::uint32_t, std::array<std::uint64_t, 2>> by_value;
    for (std::size_t i = 0; i < feature_column.size(); ++i)
        ++by_value[feature_column[i]][class_column[i] ? 1 : 0];

    double h_cond = 0.0;
    for (const auto& [value, counts] : by_value) {
        const std::uint64_t total = counts[0] + counts[1];
        h_cond += static_cast<double>(total) / static_cast<double>(n) *
                  entropy_bits({counts[0], counts[1]}, total);
    }
    const double gain = h_class - h_cond;
    return gain < 0.0 ? 0.0 : gain;  // clip the negative rounding residue
}

MetricReport evaluate_pairs(const std::vector<Document>& gold,
                            const std::vector<Prediction>& preds, bool keep_per_doc) {
    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& g : gold) by_id.emplace(g.id, &g);

    std::string unknown;
    for (const auto& p : preds)
        if (!by_id.count(p.id)) unknown += (unknown.empty() ? "" : ", ") + p.id;
    if (!unknown.empty())
        throw error("prediction ids missing from the gold set: " + unknown);

    std::unordered_map<std::string, const Prediction*> pred_by_id;
    for (const auto& p : preds) pred_by_id.emplace(p.id, &p);

    MetricReport report;
    std::vector<ExampleMetrics> tuples;
    static const LabelSet kEmpty;
    for (const auto& g : gold) {
        if (g.labels.empty()) {
            ++report.excluded;
            continue;
        }
        auto it = pred_by_id.find(g.id);
        const LabelSet& predicted = it == pred_by_id.end() ? kEmpty : it->second->labels;
        if (it == pred_by_id.end()) ++report.missing_predictions;
        if (predicted.empty()) ++report.empty_predictions;
        tuples.push_back(example_metrics(g.labels, predicted));
        if (keep_per_doc) report.per_doc.emplace_back(g.id, tuples.back());
    }
    if (tuples.empty()) throw error("no evaluable documents (every gold set is empty)");

    auto means = aggregate(tuples);
    report.ebp = means.ebp;
    report.ebr = means.ebr;
    report.ebf = means.ebf;
    report.acc = means.acc;
    report.m = means.m;
    return report;
}

MetricReport evaluate_run(const std::string& gold_path, const std::string& pred_path,
                          bool keep_per_doc) {
    return evaluate_pairs(load_corpus(gold_path), load_predictions(pred_path), keep_per_doc);
}

std::string report_to_json(const MetricReport& report) {
    nlohmann::json j;
    j["ebp"] = report.ebp;
    j["ebr"] = report.ebr;
    j["ebf"] = report.ebf;
    j["acc"] = report.acc;
    j["m"] = report.m;
    j["excluded"] = report.excluded;
    j["empty_predictions"] = report.empty_predictions;
    j["missing_predictions"] = report.missing_predictions;
    return j.dump(2);
}

std::string report_table(const MetricReport& report) {
    std::ostringstream os;
    os << "  EBP     EBR     EBF     Acc     docs\n";
    char line[128];
    std::snprintf(line, sizeof(line), "  %.4f  %.4f  %.4f  %.4f  %zu\n", report.ebp, report.ebr,
                  report.ebf, report.acc, report.m);
    os << line;
    if (report.excluded > 0) os << "  excluded (empty gold): " << report.excluded << "\n";
    if (report.empty_predictions > 0) os << "  empty predictions: " << report.empty_predictions << "\n";
    if (report.missing_predictions > 0)
        os << "  missing predictions: " << report.missing_predictions << "\n";
    return os.str();
}

}  // namespace mlabel
