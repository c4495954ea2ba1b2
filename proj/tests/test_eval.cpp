#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "mlabel/common.hpp"
#include "mlabel/eval.hpp"
#include "oracles.hpp"

using namespace mlabel;

TEST_CASE("example_metrics: hand set arithmetic") {
    const auto m = example_metrics({"A", "B", "C"}, {"B", "C", "D"});
    CHECK(m.ebp == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.ebr == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.ebf == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.acc == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("example_metrics: perfect, disjoint, empty prediction") {
    const auto perfect = example_metrics({"A", "B"}, {"A", "B"});
    CHECK(perfect.ebp == 1.0);
    CHECK(perfect.ebr == 1.0);
    CHECK(perfect.ebf == 1.0);
    CHECK(perfect.acc == 1.0);

    const auto disjoint = example_metrics({"A"}, {"B"});
    CHECK(disjoint.ebp == 0.0);
    CHECK(disjoint.ebr == 0.0);
    CHECK(disjoint.ebf == 0.0);
    CHECK(disjoint.acc == 0.0);

    const auto empty = example_metrics({"A"}, {});
    CHECK(empty.ebp == 0.0);  // convention: empty Z contributes 0
    CHECK(empty.ebr == 0.0);

    CHECK_THROWS_AS(example_metrics({}, {"A"}), error);
}

TEST_CASE("metric identities on random pairs") {
    std::mt19937_64 rng(107);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<std::string> gold_v, pred_v;
        const std::size_t ng = 1 + rng() % 6;
        const std::size_t np = rng() % 6;
        for (std::size_t i = 0; i < ng; ++i) gold_v.push_back("L" + std::to_string(rng() % 10));
        for (std::size_t i = 0; i < np; ++i) pred_v.push_back("L" + std::to_string(rng() % 10));
        const auto gold = make_label_set(gold_v);
        const auto pred = make_label_set(pred_v);

        const auto m = example_metrics(gold, pred);
        const auto want = oracle::example_metrics({gold.begin(), gold.end()},
                                                  {pred.begin(), pred.end()});
        CHECK(std::abs(m.ebp - want.ebp) <= 1e-12);
        CHECK(std::abs(m.ebr - want.ebr) <= 1e-12);
        CHECK(std::abs(m.ebf - want.ebf) <= 1e-12);
        CHECK(std::abs(m.acc - want.acc) <= 1e-12);

        // Jaccard <= Dice
        CHECK(m.acc <= m.ebf + 1e-15);
        // Dice is the harmonic mean of precision and recall when both > 0
        if (m.ebp > 0.0 && m.ebr > 0.0)
            CHECK(std::abs(m.ebf - 2.0 * m.ebp * m.ebr / (m.ebp + m.ebr)) <= 1e-12);
        // swapping Y and Z swaps precision and recall, fixes ebf and acc
        if (!pred.empty()) {
            const auto swapped = example_metrics(pred, gold);
            CHECK(std::abs(swapped.ebp - m.ebr) <= 1e-12);
            CHECK(std::abs(swapped.ebr - m.ebp) <= 1e-12);
            CHECK(std::abs(swapped.ebf - m.ebf) <= 1e-12);
            CHECK(std::abs(swapped.acc - m.acc) <= 1e-12);
        }
    }
}

TEST_CASE("aggregate: single document, simple mean, summation oracle") {
    ExampleMetrics one{0.5, 0.25, 1.0 / 3.0, 0.2};
    const auto single = aggregate({one});
    CHECK(single.ebp == one.ebp);
    CHECK(single.ebr == one.ebr);
    CHECK(single.m == 1);

    const auto two = aggregate({ExampleMetrics{0, 0, 0, 0}, ExampleMetrics{1, 1, 1, 1}});
    CHECK(two.acc == doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937_64 rng(109);
    std::vector<ExampleMetrics> tuples;
    double se = 0, sr = 0, sf = 0, sa = 0;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        ExampleMetrics m{unit(rng), unit(rng), unit(rng), unit(rng)};
        tuples.push_back(m);
        se += m.ebp;
        sr += m.ebr;
        sf += m.ebf;
        sa += m.acc;
    }
    const auto agg = aggregate(tuples);
    CHECK(std::abs(agg.ebp - se / 50.0) <= 1e-12);
    CHECK(std::abs(agg.ebr - sr / 50.0) <= 1e-12);
    CHECK(std::abs(agg.ebf - sf / 50.0) <= 1e-12);
    CHECK(std::abs(agg.acc - sa / 50.0) <= 1e-12);

    CHECK_THROWS_AS(aggregate({}), error);
}

TEST_CASE("information gain: independent feature, perfect predictor, errors") {
    // identical class distribution in both feature values -> 0 bits
    CHECK(information_gain({0, 0, 1, 1}, {1, 0, 1, 0}) == doctest::Approx(0.0).epsilon(1e-9));
    // perfect predictor of a balanced class -> 1 bit
    CHECK(information_gain({0, 0, 1, 1}, {0, 0, 1, 1}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(information_gain({0, 1}, {0, 1, 1}), error);
}

TEST_CASE("information gain is bounded by the class entropy") {
    std::mt19937_64 rng(113);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<std::uint32_t> feature(n);
        std::vector<std::uint8_t> cls(n);
        for (std::size_t i = 0; i < n; ++i) {
            feature[i] = rng() % 4;
            cls[i] = rng() % 2;
        }
        std::size_t pos = 0;
        for (auto c : cls) pos += c;
        double h = 0.0;
        if (pos > 0 && pos < n) {
            const double p = static_cast<double>(pos) / static_cast<double>(n);
            h = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
        }
        const double gain = information_gain(feature, cls);
        CHECK(gain >= 0.0);
        CHECK(gain <= h + 1e-12);
    }
}

namespace {

Document gdoc(const std::string& id, std::vector<std::string> labels) {
    Document d;
    d.id = id;
    d.labels = make_label_set(std::move(labels));
    return d;
}

Prediction pdoc(const std::string& id, std::vector<std::string> labels) {
    Prediction p;
    p.id = id;
    p.labels = make_label_set(std::move(labels));
    return p;
}

}  // namespace

TEST_CASE("evaluate_pairs: perfect predictions, exclusions, empty lines") {
    std::vector<Document> gold{gdoc("a", {"X", "Y"}), gdoc("b", {"Z"}), gdoc("c", {})};
    std::vector<Prediction> preds{pdoc("a", {"X", "Y"}), pdoc("b", {"Z"}), pdoc("c", {})};
    const auto r = evaluate_pairs(gold, preds);
    CHECK(r.ebp == 1.0);
    CHECK(r.ebr == 1.0);
    CHECK(r.ebf == 1.0);
    CHECK(r.acc == 1.0);
    CHECK(r.m == 2);
    CHECK(r.excluded == 1);  // "c" has an empty gold set

    std::vector<Prediction> with_empty{pdoc("a", {}), pdoc("b", {"Z"})};
    const auto r2 = evaluate_pairs(gold, with_empty);
    CHECK(r2.m == 2);
    CHECK(r2.empty_predictions == 1);
    CHECK(r2.ebp == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluate_pairs: prediction id not in gold is an error listing the id") {
    std::vector<Document> gold{gdoc("a", {"X"})};
    std::vector<Prediction> preds{pdoc("a", {"X"}), pdoc("ghost", {"X"})};
    CHECK_THROWS_WITH_AS(evaluate_pairs(gold, preds), doctest::Contains("ghost"), error);
}

TEST_CASE("evaluate_pairs: missing predictions score as empty and are counted") {
    std::vector<Document> gold{gdoc("a", {"X"}), gdoc("b", {"Y"})};
    std::vector<Prediction> preds{pdoc("a", {"X"})};
    const auto r = evaluate_pairs(gold, preds);
    CHECK(r.m == 2);
    CHECK(r.missing_predictions == 1);
    CHECK(r.ebr == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluate_pairs matches a spreadsheet-style recomputation on 20 docs") {
    std::mt19937_64 rng(127);
    std::vector<Document> gold;
    std::vector<Prediction> preds;
    double se = 0, sr = 0, sf = 0, sa = 0;
    for (int i = 0; i < 20; ++i) {
        std::vector<std::string> g, p;
        const std::size_t ng = 1 + rng() % 5;
        const std::size_t np = rng() % 5;
        for (std::size_t j = 0; j < ng; ++j) g.push_back("L" + std::to_string(rng() % 8));
        for (std::size_t j = 0; j < np; ++j) p.push_back("L" + std::to_string(rng() % 8));
        gold.push_back(gdoc("d" + std::to_string(i), g));
        preds.push_back(pdoc("d" + std::to_string(i), p));
        const auto want = oracle::example_metrics({gold.back().labels.begin(), gold.back().labels.end()},
                                                  {preds.back().labels.begin(), preds.back().labels.end()});
        se += want.ebp;
        sr += want.ebr;
        sf += want.ebf;
        sa += want.acc;
    }
    const auto r = evaluate_pairs(gold, preds);
    CHECK(std::abs(r.ebp - se / 20) <= 1e-12);
    CHECK(std::abs(r.ebr - sr / 20) <= 1e-12);
    CHECK(std::abs(r.ebf - sf / 20) <= 1e-12);
    CHECK(std::abs(r.acc - sa / 20) <= 1e-12);
}

TEST_CASE("evaluate_run joins files and renders reports") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mlabel_eval_test";
    fs::create_directories(dir);
    const auto gold_path = (dir / "gold.jsonl").string();
    const auto pred_path = (dir / "pred.jsonl").string();
    {
        std::ofstream g(gold_path);
        g << R"({"id":"a","title":"","abstract":"","labels":["X","Y"]})" << "\n";
        g << R"({"id":"b","title":"","abstract":"","labels":["Z"]})" << "\n";
        std::ofstream p(pred_path);
        p << R"({"id":"a","labels":["X"],"ranked":[["X",0.9]]})" << "\n";
        p << R"({"id":"b","labels":["Z","W"],"ranked":[["Z",0.8],["W",0.6]]})" << "\n";
    }
    const auto r = evaluate_run(gold_path, pred_path, /*keep_per_doc=*/true);
    CHECK(r.m == 2);
    CHECK(r.per_doc.size() == 2);
    CHECK(r.ebp == doctest::Approx((1.0 + 0.5) / 2.0).epsilon(1e-12));
    CHECK(r.ebr == doctest::Approx((0.5 + 1.0) / 2.0).epsilon(1e-12));

    const auto json = report_to_json(r);
    CHECK(json.find("\"ebp\"") != std::string::npos);
    CHECK(json.find("\"excluded\"") != std::string::npos);
    const auto table = report_table(r);
    CHECK(table.find("EBF") != std::string::npos);
    fs::remove_all(dir);
}
