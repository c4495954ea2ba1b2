#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mlabel/common.hpp"
#include "mlabel/ranker.hpp"

using namespace mlabel;

namespace {

// single binary feature, two positive f=1 rows, two negative f=0 rows
NominalDataset fixture_dataset() {
    NominalDataset d;
    d.n_bins = {2};
    d.rows = {{1}, {1}, {0}, {0}};
    d.classes = {1, 1, 0, 0};
    return d;
}

NominalDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t n_features) {
    NominalDataset d;
    d.n_bins.assign(n_features, 3);
    d.rows.resize(n);
    d.classes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.rows[i].resize(n_features);
        for (auto& b : d.rows[i]) b = rng() % 3;
        // class correlated with feature 0, plus noise
        d.classes[i] = static_cast<std::uint8_t>((d.rows[i][0] >= 1) != (rng() % 5 == 0));
    }
    return d;
}

std::vector<TrainingInstance> random_instances(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<TrainingInstance> out(n);
    for (auto& inst : out) {
        const bool pos = rng() % 2;
        inst.cls = pos ? 1 : 0;
        const double f1 = pos ? 0.5 + 0.5 * unit(rng) : 0.5 * unit(rng);
        inst.f = {f1, f1 * unit(rng), static_cast<double>(rng() % 2),
                  0.0, 0.0, static_cast<double>(rng() % 2)};
        if (rng() % 3 == 0) {
            inst.f[3] = 1.0;
            inst.f[4] = static_cast<double>(1 + rng() % 4);
        }
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("naive bayes closed form on the 4-instance fixture") {
    const auto data = fixture_dataset();
    const auto nb = train_naive_bayes(data);
    CHECK(nb.prior[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nb.prior[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(nb.cond[0][1][1] == doctest::Approx(0.75).epsilon(1e-9));  // P(f=1 | +)
    CHECK(nb.cond[0][1][0] == doctest::Approx(0.25).epsilon(1e-9));  // P(f=1 | -)
    const auto post = nb.posteriors({1});
    CHECK(post[1] == doctest::Approx(0.75).epsilon(1e-9));  // 0.375 / (0.375 + 0.125)
    CHECK(post[0] + post[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("naive bayes posteriors sum to one on random rows") {
    std::mt19937_64 rng(51);
    const auto data = random_dataset(rng, 200, 4);
    const auto nb = train_naive_bayes(data);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<std::uint32_t> row(4);
        for (auto& b : row) b = rng() % 3;
        const auto post = nb.posteriors(row);
        CHECK(std::abs(post[0] + post[1] - 1.0) <= 1e-12);
        CHECK(post[1] >= 0.0);
        CHECK(post[1] <= 1.0);
    }
}

TEST_CASE("decision tree splits the fixture once with pure leaves") {
    const auto data = fixture_dataset();
    std::vector<std::uint32_t> all{0, 1, 2, 3};
    const auto tree = build_tree(data, all, 1, nullptr);
    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].feature == 0);
    const auto& left = tree.nodes[tree.nodes[0].first_child];
    const auto& right = tree.nodes[tree.nodes[0].first_child + 1];
    CHECK(left.total == 2);
    CHECK(left.pos == 0);   // pure before the Laplace correction
    CHECK(right.total == 2);
    CHECK(right.pos == 2);
    CHECK(tree.score({1}) == doctest::Approx(0.75).epsilon(1e-12));  // (2+1)/(2+2)
    CHECK(tree.score({0}) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("random forest with B=1, full subset, no bootstrap equals the decision tree") {
    std::mt19937_64 rng(53);
    const auto instances = random_instances(rng, 300);
    const RankerModel dt = train(instances, Algorithm::decision_tree, 7, 25);
    RandomForestOptions opts;
    opts.n_trees = 1;
    opts.feature_subset = kNumFeatures;
    opts.bootstrap = false;
    const RankerModel rf = train(instances, Algorithm::random_forest, 7, 25, opts);
    for (int iter = 0; iter < 200; ++iter) {
        std::array<double, kNumFeatures> f{};
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (auto& v : f) v = unit(rng);
        CHECK(rf.score(f) == dt.score(f));
    }
}

TEST_CASE("random forest is deterministic in seed and thread count") {
    std::mt19937_64 rng(59);
    const auto instances = random_instances(rng, 250);
    RandomForestOptions opts;
    opts.n_trees = 12;
    const RankerModel a = train(instances, Algorithm::random_forest, 99, 25, opts, 1);
    const RankerModel b = train(instances, Algorithm::random_forest, 99, 25, opts, 2);
    const RankerModel c = train(instances, Algorithm::random_forest, 100, 25, opts, 1);
    std::array<double, kNumFeatures> probe{0.4, 0.2, 1.0, 0.0, 0.0, 1.0};
    CHECK(a.score(probe) == b.score(probe));
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t)
        CHECK(a.trees[t].nodes.size() == b.trees[t].nodes.size());
    // different seed: same API, almost surely a different forest
    bool any_diff = false;
    for (std::size_t t = 0; t < a.trees.size(); ++t)
        if (a.trees[t].nodes.size() != c.trees[t].nodes.size()) any_diff = true;
    if (!any_diff) CHECK(a.score(probe) != c.score(probe));
}

TEST_CASE("train rejects degenerate and empty inputs") {
    CHECK_THROWS_AS(train({}, Algorithm::naive_bayes, 1, 25), error);
    std::vector<TrainingInstance> single_class(10);
    for (auto& inst : single_class) {
        inst.f = {0.5, 0.2, 1, 0, 0, 0};
        inst.cls = 1;
    }
    CHECK_THROWS_WITH_AS(train(single_class, Algorithm::naive_bayes, 1, 25),
                         doctest::Contains("degenerate"), error);
    CHECK_THROWS_AS(parse_algorithm("mlp"), error);
}

TEST_CASE("untrained model refuses to score") {
    RankerModel empty;
    std::array<double, kNumFeatures> f{};
    CHECK_THROWS_AS(empty.score(f), error);
}

TEST_CASE("model files round-trip bit-exactly") {
    std::mt19937_64 rng(61);
    const auto instances = random_instances(rng, 200);
    namespace fs = std::filesystem;
    const auto p1 = (fs::temp_directory_path() / "mlabel_m1.bin").string();
    const auto p2 = (fs::temp_directory_path() / "mlabel_m2.bin").string();

    for (Algorithm algo :
         {Algorithm::naive_bayes, Algorithm::decision_tree, Algorithm::random_forest}) {
        RandomForestOptions opts;
        opts.n_trees = 5;
        const RankerModel m = train(instances, algo, 17, 25, opts);
        m.save(p1);
        const RankerModel loaded = RankerModel::load(p1);
        loaded.save(p2);
        CHECK(slurp(p1) == slurp(p2));
        CHECK(loaded.k == m.k);
        CHECK(loaded.seed == m.seed);
        std::array<double, kNumFeatures> probe{0.3, 0.1, 0.0, 1.0, 2.0, 0.0};
        CHECK(loaded.score(probe) == m.score(probe));
    }
    fs::remove(p1);
    fs::remove(p2);
}

TEST_CASE("score_candidates ranks by score then label, independent of input order") {
    std::mt19937_64 rng(67);
    const auto instances = random_instances(rng, 300);
    const RankerModel model = train(instances, Algorithm::naive_bayes, 3, 25);

    std::vector<CandidateLabel> cands(12);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        cands[i].label = "L" + std::to_string(i % 6);  // duplicates of feature rows, unique labels
        cands[i].label += char('a' + static_cast<char>(i / 6));
        for (auto& v : cands[i].f) v = unit(rng);
    }
    auto shuffled = cands;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    auto r1 = score_candidates(model, cands);
    auto r2 = score_candidates(model, shuffled);
    CHECK(r1 == r2);
    for (std::size_t i = 1; i < r1.size(); ++i) {
        CHECK(r1[i - 1].second >= r1[i].second);
        if (r1[i - 1].second == r1[i].second) CHECK(r1[i - 1].first < r1[i].first);
        CHECK(r1[i].second >= 0.0);
        CHECK(r1[i].second <= 1.0);
    }
}
