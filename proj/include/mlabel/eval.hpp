#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlabel/classify.hpp"
#include "mlabel/corpus.hpp"

namespace mlabel {

struct ExampleMetrics {
    double ebp = 0.0;  // |Y ∩ Z| / |Z| (0 when Z is empty)
    double ebr = 0.0;  // |Y ∩ Z| / |Y|
    double ebf = 0.0;  // 2|Y ∩ Z| / (|Y| + |Z|)
    double acc = 0.0;  // |Y ∩ Z| / |Y ∪ Z|
};

struct MetricReport {
    double ebp = 0.0, ebr = 0.0, ebf = 0.0, acc = 0.0;
    std::size_t m = 0;                  // evaluated documents
    std::size_t excluded = 0;           // documents with an empty gold set
    std::size_t empty_predictions = 0;  // evaluated documents with empty Z
    std::size_t missing_predictions = 0;
    std::vector<std::pair<std::string, ExampleMetrics>> per_doc;  // filled on request
};

// Per-document example-based metrics; gold must be non-empty.
ExampleMetrics example_metrics(const LabelSet& gold, const LabelSet& predicted);

// Arithmetic mean over per-document tuples; error on empty input.
MetricReport aggregate(const std::vector<ExampleMetrics>& per_doc);

// H(class) - sum_v p(v) H(class|v), in bits.
double information_gain(const std::vector<std::uint32_t>& feature_column,
                        const std::vector<std::uint8_t>& class_column);

// Joins gold and prediction files by document id. Prediction ids missing
// from the gold set are an error; gold documents without a prediction line
// count as empty predictions.
MetricReport evaluate_run(const std::string& gold_path, const std::string& pred_path,
                          bool keep_per_doc = false);
MetricReport evaluate_pairs(const std::vector<Document>& gold,
                            const std::vector<Prediction>& preds, bool keep_per_doc = false);

std::string report_to_json(const MetricReport& report);
std::string report_table(const MetricReport& report);

}  // namespace mlabel
