#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "mlabel/common.hpp"
#include "mlabel/vsm_index.hpp"
#include "oracles.hpp"

using namespace mlabel;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("build_index: single document") {
    std::vector<Document> docs{{"d1", "alpha7", "", {}}};
    auto ix = VectorIndex::build(docs);
    CHECK(ix.n_docs() == 1);
    CHECK(ix.n_terms() == 1);
    CHECK(ix.doc_freq("alpha7") == 1);
    CHECK(ix.posting(0).doc == std::vector<std::uint32_t>{0});
    CHECK(ix.posting(0).tf == std::vector<float>{1.0f});
}

TEST_CASE("build_index: shared term doc_freq") {
    std::vector<Document> docs{{"d1", "alpha7 beta9", "", {}}, {"d2", "alpha7", "", {}}};
    auto ix = VectorIndex::build(docs);
    CHECK(ix.doc_freq("alpha7") == 2);
    CHECK(ix.doc_freq("beta9") == 1);
}

TEST_CASE("build_index: empty collection rejected") {
    CHECK_THROWS_AS(VectorIndex::build({}), error);
}

TEST_CASE("build_index matches naive per-document scan on a fixture") {
    std::mt19937_64 rng(17);
    auto docs = oracle::random_corpus(rng, 3, 12);
    auto ix = VectorIndex::build(docs);

    // naive scan: df and postings recomputed per document
    std::map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> naive;
    for (std::uint32_t d = 0; d < docs.size(); ++d)
        for (const auto& [t, c] : term_vector(docs[d])) naive[t].push_back({d, c});

    REQUIRE(ix.n_terms() == naive.size());
    std::size_t t_ix = 0;
    for (const auto& [term, posts] : naive) {
        CHECK(ix.terms()[t_ix] == term);
        CHECK(ix.doc_freq(term) == posts.size());
        const auto& p = ix.posting(t_ix);
        REQUIRE(p.doc.size() == posts.size());
        for (std::size_t i = 0; i < posts.size(); ++i) {
            CHECK(p.doc[i] == posts[i].first);
            CHECK(p.tf[i] == static_cast<float>(posts[i].second));
        }
        ++t_ix;
    }
}

TEST_CASE("tfidf_weight: term in every document weighs zero") {
    std::vector<Document> docs{{"d1", "alpha7", "", {}}, {"d2", "alpha7 beta9", "", {}}};
    auto ix = VectorIndex::build(docs);
    CHECK(ix.tfidf_weight("alpha7", "d1") == 0.0);
}

TEST_CASE("tfidf_weight: hand arithmetic tf=2, n=4, df=1") {
    std::vector<Document> docs{
        {"d1", "alpha7 alpha7", "", {}},
        {"d2", "beta9", "", {}},
        {"d3", "beta9", "", {}},
        {"d4", "beta9", "", {}},
    };
    auto ix = VectorIndex::build(docs);
    CHECK(ix.tfidf_weight("alpha7", "d1") ==
          doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("tfidf_weight: absent term is an error, not zero") {
    std::vector<Document> docs{{"d1", "alpha7", "", {}}, {"d2", "beta9", "", {}}};
    auto ix = VectorIndex::build(docs);
    CHECK_THROWS_AS(ix.tfidf_weight("beta9", "d1"), error);
    CHECK_THROWS_AS(ix.tfidf_weight("gamma3", "d1"), error);
    CHECK_THROWS_AS(ix.tfidf_weight("alpha7", "nope"), error);
}

TEST_CASE("cosine: self, disjoint, hand example, zero vectors") {
    std::map<std::string, double> v{{"x", 1.0}, {"y", 2.0}};
    CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-12));

    std::map<std::string, double> w{{"z", 3.0}};
    CHECK(cosine(v, w) == 0.0);

    std::map<std::string, double> a{{"p", 1.0}, {"q", 1.0}};
    std::map<std::string, double> b{{"p", 1.0}};
    CHECK(cosine(a, b) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    std::map<std::string, double> zero;
    CHECK_THROWS_AS(cosine(zero, zero), error);
    CHECK(cosine(v, zero) == 0.0);
}

TEST_CASE("cosine: symmetry and scaling invariance on random vectors") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> weight(0.0, 5.0);
    std::uniform_int_distribution<int> term(0, 15);
    for (int iter = 0; iter < 200; ++iter) {
        std::map<std::string, double> a, b;
        for (int i = 0; i < 8; ++i) {
            a["t" + std::to_string(term(rng))] = weight(rng) + 0.01;
            b["t" + std::to_string(term(rng))] = weight(rng) + 0.01;
        }
        const double ab = cosine(a, b);
        const double ba = cosine(b, a);
        CHECK(std::abs(ab - ba) <= 1e-12);

        std::map<std::string, double> a2;
        for (const auto& [t, w] : a) a2[t] = 3.7 * w;
        CHECK(cosine(a2, b) == doctest::Approx(ab).epsilon(1e-12));
    }
}

TEST_CASE("top_k: identical query ranks first with score 1") {
    std::mt19937_64 rng(29);
    auto docs = oracle::random_corpus(rng, 20, 30);
    auto ix = VectorIndex::build(docs);
    auto hits = ix.top_k(docs[7], 5, /*exclude_self=*/false);
    REQUIRE(!hits.empty());
    CHECK(hits[0].doc_id == "d7");
    CHECK(hits[0].score == doctest::Approx(1.0).epsilon(1e-12));

    auto excl = ix.top_k(docs[7], 5, /*exclude_self=*/true);
    for (const auto& h : excl) CHECK(h.doc_id != "d7");
}

TEST_CASE("top_k: k larger than the collection returns everything sorted") {
    std::mt19937_64 rng(31);
    auto docs = oracle::random_corpus(rng, 12, 2000);  // sparse overlap, zero scores likely
    auto ix = VectorIndex::build(docs);
    auto hits = ix.top_k(docs[0], 500, false);
    CHECK(hits.size() == 12);
    for (std::size_t i = 1; i < hits.size(); ++i) {
        CHECK(hits[i - 1].score >= hits[i].score);
        if (hits[i - 1].score == hits[i].score) CHECK(hits[i - 1].doc_id < hits[i].doc_id);
    }
}

TEST_CASE("top_k: unclassifiable queries throw") {
    std::mt19937_64 rng(37);
    auto docs = oracle::random_corpus(rng, 5, 10);
    auto ix = VectorIndex::build(docs);
    Document empty{"q", "", "the of and", {}};
    CHECK_THROWS_WITH_AS(ix.top_k(empty, 3, false), doctest::Contains("unclassifiable"), error);
    Document unseen{"q", "zzz999qq", "", {}};
    CHECK_THROWS_WITH_AS(ix.top_k(unseen, 3, false), doctest::Contains("unclassifiable"), error);
}

TEST_CASE("retrieval equivalence: 200-doc fixture, k=25, vs exhaustive oracle") {
    std::mt19937_64 rng(41);
    auto docs = oracle::random_corpus(rng, 200, 300);
    auto ix = VectorIndex::build(docs);
    oracle::ExhaustiveScan scan(docs);
    for (int q = 0; q < 40; ++q) {
        const auto& query = docs[static_cast<std::size_t>(q) * 5 % docs.size()];
        auto got = ix.top_k(query, 25, false);
        auto want = scan.top_k(query, 25, false);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].doc_id == want[i].id);
            CHECK(std::abs(got[i].score - want[i].score) <= 1e-12);
        }
    }
}

TEST_CASE("retrieval equivalence holds across corpora and k values") {
    std::mt19937_64 rng(43);
    for (int c = 0; c < 5; ++c) {
        const std::size_t n_docs = 40 + (rng() % 80);
        auto docs = oracle::random_corpus(rng, n_docs, 60 + (rng() % 200));
        auto ix = VectorIndex::build(docs);
        oracle::ExhaustiveScan scan(docs);
        for (std::size_t k : {1ul, 3ul, 10ul, n_docs + 5}) {
            for (int q = 0; q < 8; ++q) {
                const auto& query = docs[rng() % docs.size()];
                const bool excl = (q % 2) == 0;
                auto got = ix.top_k(query, k, excl);
                auto want = scan.top_k(query, k, excl);
                REQUIRE(got.size() == want.size());
                for (std::size_t i = 0; i < got.size(); ++i) {
                    CHECK(got[i].doc_id == want[i].id);
                    CHECK(std::abs(got[i].score - want[i].score) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("index persistence: deterministic, versioned, round-trips") {
    std::mt19937_64 rng(47);
    auto docs = oracle::random_corpus(rng, 30, 40, 3);
    auto ix1 = VectorIndex::build(docs);
    auto ix2 = VectorIndex::build(docs);

    const auto p1 = temp_path("mlabel_ix1.bin");
    const auto p2 = temp_path("mlabel_ix2.bin");
    ix1.save(p1);
    ix2.save(p2);
    CHECK(slurp(p1) == slurp(p2));  // byte-identical rebuilds

    auto loaded = VectorIndex::load(p1);
    const auto p3 = temp_path("mlabel_ix3.bin");
    loaded.save(p3);
    CHECK(slurp(p1) == slurp(p3));  // load/save round-trip

    CHECK(loaded.n_docs() == ix1.n_docs());
    CHECK(loaded.doc_labels("d3") == ix1.doc_labels("d3"));
    auto hits1 = ix1.top_k(docs[5], 7, true);
    auto hits2 = loaded.top_k(docs[5], 7, true);
    REQUIRE(hits1.size() == hits2.size());
    for (std::size_t i = 0; i < hits1.size(); ++i) {
        CHECK(hits1[i].doc_id == hits2[i].doc_id);
        CHECK(hits1[i].score == hits2[i].score);
    }

    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
    std::filesystem::remove(p3);
}

TEST_CASE("index load rejects wrong magic and version") {
    const auto bad = temp_path("mlabel_bad.bin");
    {
        std::ofstream out(bad, std::ios::binary);
        out << "NOTANIDX" << std::string(16, '\0');
    }
    CHECK_THROWS_AS(VectorIndex::load(bad), error);
    std::filesystem::remove(bad);
}
