#pragma once

#include <array>
#include <string>
#include <vector>

#include "mlabel/esa.hpp"
#include "mlabel/eval.hpp"
#include "mlabel/ranker.hpp"
#include "mlabel/select.hpp"
#include "mlabel/synth.hpp"

namespace mlabel {

// Classifier/strategy comparison harness over the planted-topic benchmark.
// One retrieval + feature pass is shared by every configuration, so the grid
// is cheap; all artifacts land in out_dir when it is set.
struct BenchConfig {
    SynthConfig synth;
    std::size_t k = 25;
    double alpha = 1.6;
    double tau = 0.5;
    std::uint32_t rf_trees = 100;
    unsigned threads = 0;
    std::string out_dir;  // empty: keep everything in memory
};

struct BenchResult {
    struct Cell {
        Algorithm algo;
        Strategy strategy;
        MetricReport report;
    };
    std::vector<Cell> grid;                               // 3 algos x 3 strategies
    std::vector<std::pair<Measure, MetricReport>> esa;    // oracle-N protocol
    std::array<double, kNumFeatures> info_gain{};         // on the training instances
    MetricReport baseline;                                // 3 most frequent topics
    double candidate_recall = 0.0;                        // macro |gold ∩ candidates| / |gold|
    std::size_t n_instances = 0;
};

BenchResult run_bench(const BenchConfig& cfg);

std::string bench_tables(const BenchResult& r);
std::string bench_report_json(const BenchConfig& cfg, const BenchResult& r);

}  // namespace mlabel
