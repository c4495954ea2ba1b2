#include "mlabel/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "mlabel/common.hpp"
#include "mlabel/classify.hpp"
#include "mlabel/esa.hpp"
#include "mlabel/vsm_index.hpp"

namespace mlabel {

namespace {

LabelSet most_frequent_labels(const std::vector<Document>& train, std::size_t n) {
    std::map<LabelId, std::size_t> freq;
    for (const auto& d : train)
        for (const auto& l : d.labels) ++freq[l];
    std::vector<std::pair<LabelId, std::size_t>> by_freq(freq.begin(), freq.end());
    std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<LabelId> out;
    for (std::size_t i = 0; i < n && i < by_freq.size(); ++i) out.push_back(by_freq[i].first);
    return make_label_set(std::move(out));
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    namespace fs = std::filesystem;
    const bool dump = !cfg.out_dir.empty();
    if (dump) fs::create_directories(cfg.out_dir);
    auto artifact = [&](const std::string& name) { return (fs::path(cfg.out_dir) / name).string(); };

    log_info("bench: generating planted corpus (topics=" + std::to_string(cfg.synth.topics) +
             ", train=" + std::to_string(cfg.synth.train_docs) +
             ", test=" + std::to_string(cfg.synth.test_docs) + ")");
    SynthData data = generate_planted(cfg.synth);
    if (dump) {
        save_corpus(data.train, artifact("train.jsonl"));
        save_corpus(data.test, artifact("test.jsonl"));
        save_vocabulary(data.vocab, artifact("vocab.json"));
    }

    log_info("bench: building index over " + std::to_string(data.train.size()) + " documents");
    VectorIndex index = VectorIndex::build(data.train);
    if (dump) index.save(artifact("train.idx"));

    log_info("bench: assembling training instances (k=" + std::to_string(cfg.k) + ")");
    AssembleResult assembled =
        assemble_training_set(data.train, index, data.vocab, cfg.k, cfg.threads);

    BenchResult result;
    result.n_instances = assembled.instances.size();

    // Feature relevance, measured on the same discretized bins the learners see.
    {
        const auto disc = discretize_fit(assembled.instances);
        std::vector<std::uint8_t> classes(assembled.instances.size());
        for (std::size_t i = 0; i < assembled.instances.size(); ++i)
            classes[i] = assembled.instances[i].cls;
        std::vector<std::vector<std::uint32_t>> rows(assembled.instances.size());
        for (std::size_t i = 0; i < assembled.instances.size(); ++i)
            rows[i] = discretize_apply(disc, assembled.instances[i].f);
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            std::vector<std::uint32_t> column(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][f];
            result.info_gain[f] = information_gain(column, classes);
        }
    }

    // Shared retrieval + feature extraction over the test set.
    struct TestDocState {
        std::vector<Neighbor> neighbors;
        std::vector<CandidateLabel> candidates;
        bool ok = false;
    };
    std::vector<TestDocState> states(data.test.size());
    parallel_for(data.test.size(), cfg.threads, [&](std::size_t i) {
        auto& st = states[i];
        try {
            st.neighbors = index.top_k(data.test[i], cfg.k, /*exclude_self=*/false);
        } catch (const error&) {
            return;
        }
        if (st.neighbors.empty()) return;
        st.candidates = extract_candidates(data.test[i], st.neighbors, cfg.k, data.vocab);
        st.ok = true;
    });

    // Candidate-recall ceiling: macro share of gold labels present in the
    // neighbor-label union.
    {
        double sum = 0.0;
        std::size_t counted = 0;
        for (std::size_t i = 0; i < data.test.size(); ++i) {
            const auto& gold = data.test[i].labels;
            if (gold.empty()) continue;
            std::size_t covered = 0;
            if (states[i].ok) {
                for (const auto& g : gold)
                    for (const auto& c : states[i].candidates)
                        if (c.label == g) {
                            ++covered;
                            break;
                        }
            }
            sum += static_cast<double>(covered) / static_cast<double>(gold.size());
            ++counted;
        }
        result.candidate_recall = counted ? sum / static_cast<double>(counted) : 0.0;
    }

    // Classifier x strategy grid, one model per algorithm.
    const Algorithm algos[] = {Algorithm::naive_bayes, Algorithm::decision_tree,
                               Algorithm::random_forest};
    const Strategy strategies[] = {Strategy::threshold, Strategy::avgsize, Strategy::cutoff};
    for (Algorithm algo : algos) {
        RandomForestOptions rf;
        rf.n_trees = cfg.rf_trees;
        log_info(std::string("bench: training ") + algorithm_name(algo));
        RankerModel model = train(assembled.instances, algo, cfg.synth.seed,
                                  static_cast<std::uint32_t>(cfg.k), rf, cfg.threads);
        if (dump) model.save(artifact(std::string("model_") + algorithm_name(algo) + ".bin"));

        std::vector<RankedLabels> ranked(data.test.size());
        parallel_for(data.test.size(), cfg.threads, [&](std::size_t i) {
            if (!states[i].ok) return;
            auto candidates = states[i].candidates;  // relevance is per-model
            ranked[i] = score_candidates(model, candidates);
        });

        for (Strategy strategy : strategies) {
            std::vector<Prediction> preds(data.test.size());
            for (std::size_t i = 0; i < data.test.size(); ++i) {
                preds[i].id = data.test[i].id;
                if (!states[i].ok) continue;
                preds[i].ranked = ranked[i];
                switch (strategy) {
                    case Strategy::threshold:
                        preds[i].labels = select_threshold(ranked[i], cfg.tau);
                        break;
                    case Strategy::avgsize:
                        preds[i].labels = select_average_size(ranked[i], states[i].neighbors);
                        break;
                    case Strategy::cutoff:
                        preds[i].labels = select_cutoff(ranked[i], cfg.alpha);
                        break;
                }
            }
            if (dump)
                save_predictions(preds, artifact(std::string("pred_") + algorithm_name(algo) +
                                                 "_" + strategy_name(strategy) + ".jsonl"));
            result.grid.push_back({algo, strategy, evaluate_pairs(data.test, preds)});
        }
    }

    // ESA side, oracle-N protocol (n = |gold| per document).
    for (Measure measure : {Measure::jaccard, Measure::tf_icf}) {
        log_info(std::string("bench: ESA associations (") + measure_name(measure) + ")");
        AssocOptions opts;
        opts.measure = measure;
        AssociationIndex assoc = AssociationIndex::build(data.train, opts);
        if (dump) assoc.save(artifact(std::string("assoc_") + measure_name(measure) + ".bin"));

        std::vector<Prediction> preds(data.test.size());
        parallel_for(data.test.size(), cfg.threads, [&](std::size_t i) {
            preds[i].id = data.test[i].id;
            if (data.test[i].labels.empty()) return;
            try {
                preds[i].ranked = assoc.classify(data.test[i], data.test[i].labels.size());
            } catch (const error&) {
                return;
            }
            std::vector<LabelId> labels;
            for (const auto& [l, s] : preds[i].ranked) labels.push_back(l);
            preds[i].labels = make_label_set(std::move(labels));
        });
        if (dump)
            save_predictions(preds,
                             artifact(std::string("esa_pred_") + measure_name(measure) + ".jsonl"));
        result.esa.emplace_back(measure, evaluate_pairs(data.test, preds));
    }

    // Frequency baseline: the same three labels for every document.
    {
        const LabelSet top3 = most_frequent_labels(data.train, 3);
        std::vector<Prediction> preds(data.test.size());
        for (std::size_t i = 0; i < data.test.size(); ++i) {
            preds[i].id = data.test[i].id;
            preds[i].labels = top3;
        }
        result.baseline = evaluate_pairs(data.test, preds);
    }

    if (dump) {
        std::ofstream out(artifact("report.json"), std::ios::binary);
        out << bench_report_json(cfg, result) << "\n";
    }
    return result;
}

std::string bench_tables(const BenchResult& r) {
    std::ostringstream os;
    char line[160];

    os << "feature relevance (information gain, bits)\n";
    os << "  feature        gain\n";
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        std::snprintf(line, sizeof(line), "  f%zu           %8.4f\n", f + 1, r.info_gain[f]);
        os << line;
    }

    os << "\nclassifier x strategy (EBP / EBR / EBF / Acc)\n";
    os << "  strategy   classifier   EBP     EBR     EBF     Acc\n";
    for (const auto& cell : r.grid) {
        std::snprintf(line, sizeof(line), "  %-9s  %-10s  %.4f  %.4f  %.4f  %.4f\n",
                      strategy_name(cell.strategy), algorithm_name(cell.algo), cell.report.ebp,
                      cell.report.ebr, cell.report.ebf, cell.report.acc);
        os << line;
    }

    os << "\nESA association measures (oracle-N)\n";
    os << "  measure   EBF     Acc\n";
    for (const auto& [measure, report] : r.esa) {
        std::snprintf(line, sizeof(line), "  %-8s  %.4f  %.4f\n", measure_name(measure),
                      report.ebf, report.acc);
        os << line;
    }

    std::snprintf(line, sizeof(line),
                  "\nbaseline (3 most frequent topics): EBF %.4f\ncandidate recall: %.4f\n"
                  "training instances: %zu\n",
                  r.baseline.ebf, r.candidate_recall, r.n_instances);
    os << line;
    return os.str();
}

std::string bench_report_json(const BenchConfig& cfg, const BenchResult& r) {
    nlohmann::json j;
    j["config"] = {{"seed", cfg.synth.seed},
                   {"topics", cfg.synth.topics},
                   {"train_docs", cfg.synth.train_docs},
                   {"test_docs", cfg.synth.test_docs},
                   {"k", cfg.k},
                   {"alpha", cfg.alpha},
                   {"tau", cfg.tau},
                   {"rf_trees", cfg.rf_trees}};
    j["info_gain"] = r.info_gain;
    auto report_json = [](const MetricReport& m) {
        return nlohmann::json{{"ebp", m.ebp},     {"ebr", m.ebr},
                              {"ebf", m.ebf},     {"acc", m.acc},
                              {"m", m.m},         {"excluded", m.excluded},
                              {"empty_predictions", m.empty_predictions},
                              {"missing_predictions", m.missing_predictions}};
    };
    j["grid"] = nlohmann::json::array();
    for (const auto& cell : r.grid)
        j["grid"].push_back({{"algo", algorithm_name(cell.algo)},
                             {"strategy", strategy_name(cell.strategy)},
                             {"metrics", report_json(cell.report)}});
    j["esa"] = nlohmann::json::array();
    for (const auto& [measure, report] : r.esa)
        j["esa"].push_back({{"measure", measure_name(measure)}, {"metrics", report_json(report)}});
    j["baseline"] = report_json(r.baseline);
    j["candidate_recall"] = r.candidate_recall;
    j["n_instances"] = r.n_instances;
    return j.dump(2);
}

}  // namespace mlabel
