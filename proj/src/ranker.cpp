#include "mlabel/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "mlabel/common.hpp"
#include "mlabel/io.hpp"

namespace mlabel {

namespace {
constexpr char kModelMagic[8] = {'M', 'L', 'B', 'M', 'D', 'L', '0', '\0'};
constexpr std::uint32_t kModelVersion = 1;
constexpr double kMinGain = 1e-12;
}  // namespace

Algorithm parse_algorithm(const std::string& name) {
    if (name == "nb") return Algorithm::naive_bayes;
    if (name == "dt") return Algorithm::decision_tree;
    if (name == "rf") return Algorithm::random_forest;
    throw error("unknown algorithm \"" + name + "\" (expected nb, dt or rf)");
}

const char* algorithm_name(Algorithm algo) {
    switch (algo) {
        case Algorithm::naive_bayes: return "nb";
        case Algorithm::decision_tree: return "dt";
        case Algorithm::random_forest: return "rf";
    }
    return "?";
}

AssembleResult assemble_training_set(const std::vector<Document>& train_docs,
                                     const VectorIndex& index, const LabelVocabulary& vocab,
                                     std::size_t k, unsigned threads) {
    for (const auto& d : train_docs)
        if (d.labels.empty())
            throw error("training document \"" + d.id + "\" has no gold labels");

    std::vector<std::vector<TrainingInstance>> per_doc(train_docs.size());
    std::vector<std::uint8_t> skipped(train_docs.size(), 0);
    parallel_for(train_docs.size(), threads, [&](std::size_t i) {
        const Document& doc = train_docs[i];
        std::vector<Neighbor> neighbors;
        try {
            neighbors = index.top_k(doc, k, /*exclude_self=*/true);
        } catch (const error&) {
            skipped[i] = 1;
            return;
        }
        if (neighbors.empty()) {
            skipped[i] = 1;
            return;
        }
        auto candidates = extract_candidates(doc, neighbors, k, vocab);
        per_doc[i].reserve(candidates.size());
        for (const auto& c : candidates) {
            TrainingInstance inst;
            inst.f = c.f;
            inst.cls = std::binary_search(doc.labels.begin(), doc.labels.end(), c.label) ? 1 : 0;
            per_doc[i].push_back(inst);
        }
    });

    AssembleResult out;
    for (std::size_t i = 0; i < per_doc.size(); ++i) {
        if (skipped[i]) {
            ++out.skipped_docs;
            log_warn("skipping training document \"" + train_docs[i].id +
                     "\": no usable terms or neighbors");
            continue;
        }
        out.instances.insert(out.instances.end(), per_doc[i].begin(), per_doc[i].end());
    }
    return out;
}

std::vector<FeatureDisc> discretize_fit(const std::vector<TrainingInstance>& instances) {
    if (instances.size() < 2) throw error("discretization needs at least two instances");
    bool has_pos = false, has_neg = false;
    for (const auto& inst : instances) (inst.cls ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw error("degenerate training set: only one class present");

    std::vector<FeatureDisc> disc(kNumFeatures);
    std::vector<std::uint8_t> classes(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i) classes[i] = instances[i].cls;

    for (std::size_t f : kNumericFeatures) {
        std::vector<double> column(instances.size());
        for (std::size_t i = 0; i < instances.size(); ++i) column[i] = instances[i].f[f];
        disc[f].numeric = true;
        disc[f].cuts = mdl_cut_points(column, classes);
        disc[f].n_bins = static_cast<std::uint32_t>(disc[f].cuts.size()) + 1;
    }
    return disc;
}

std::vector<std::uint32_t> discretize_apply(const std::vector<FeatureDisc>& disc,
                                            const std::array<double, kNumFeatures>& f) {
    if (disc.size() != kNumFeatures) throw error("model has no discretization map");
    std::vector<std::uint32_t> row(kNumFeatures);
    for (std::size_t i = 0; i < kNumFeatures; ++i)
        row[i] = disc[i].numeric ? apply_cuts(disc[i].cuts, f[i]) : (f[i] != 0.0 ? 1u : 0u);
    return row;
}

// ---- Naive Bayes ----

NaiveBayesModel train_naive_bayes(const NominalDataset& data) {
    const std::size_t n = data.size();
    std::array<std::uint64_t, 2> class_count{};
    for (auto c : data.classes) ++class_count[c];
    if (class_count[0] == 0 || class_count[1] == 0)
        throw error("degenerate training set: only one class present");

    NaiveBayesModel m;
    m.prior = {static_cast<double>(class_count[0]) / static_cast<double>(n),
               static_cast<double>(class_count[1]) / static_cast<double>(n)};
    m.cond.resize(data.n_features());
    for (std::size_t f = 0; f < data.n_features(); ++f) {
        std::vector<std::array<std::uint64_t, 2>> counts(data.n_bins[f], {0, 0});
        for (std::size_t i = 0; i < n; ++i) ++counts[data.rows[i][f]][data.classes[i]];
        m.cond[f].resize(data.n_bins[f]);
        for (std::uint32_t b = 0; b < data.n_bins[f]; ++b)
            for (int c = 0; c < 2; ++c)
                m.cond[f][b][static_cast<std::size_t>(c)] =
                    (static_cast<double>(counts[b][static_cast<std::size_t>(c)]) + 1.0) /
                    (static_cast<double>(class_count[static_cast<std::size_t>(c)]) +
                     static_cast<double>(data.n_bins[f]));
    }
    return m;
}

std::array<double, 2> NaiveBayesModel::posteriors(const std::vector<std::uint32_t>& row) const {
    double joint0 = prior[0], joint1 = prior[1];
    for (std::size_t f = 0; f < cond.size(); ++f) {
        const std::uint32_t bin = std::min<std::uint32_t>(
            row[f], static_cast<std::uint32_t>(cond[f].size()) - 1);
        joint0 *= cond[f][bin][0];
        joint1 *= cond[f][bin][1];
    }
    const double z = joint0 + joint1;
    return {joint0 / z, joint1 / z};
}

// ---- decision trees ----

namespace {

double entropy_bits(std::uint64_t pos, std::uint64_t total) {
    if (total == 0 || pos == 0 || pos == total) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct TreeBuilder {
    const NominalDataset& data;
    std::uint32_t feature_subset;
    std::mt19937_64* rng;
    std::vector<TreeNode> nodes;

    // Fills node `me` from the instances reaching it; children of a split are
    // allocated as one contiguous block so lookup is first_child + bin.
    void fill(std::uint32_t me, std::vector<std::uint32_t> rows, std::uint32_t remaining) {
        std::uint64_t pos = 0;
        for (auto r : rows) pos += data.classes[r];
        nodes[me].pos = pos;
        nodes[me].total = rows.size();
        if (rows.empty() || pos == 0 || pos == rows.size() || remaining == 0) return;

        std::vector<std::uint32_t> candidates;
        for (std::uint32_t f = 0; f < data.n_features(); ++f)
            if (remaining & (1u << f)) candidates.push_back(f);
        if (rng != nullptr && feature_subset < candidates.size()) {
            // partial Fisher-Yates draw of feature_subset distinct features
            for (std::uint32_t i = 0; i < feature_subset; ++i) {
                std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
                std::swap(candidates[i], candidates[pick(*rng)]);
            }
            candidates.resize(feature_subset);
            std::sort(candidates.begin(), candidates.end());
        }

        const double node_entropy = entropy_bits(pos, rows.size());
        double best_gain = kMinGain;  // a split must clear this
        std::int32_t best_feature = -1;
        for (std::uint32_t f : candidates) {
            std::vector<std::array<std::uint64_t, 2>> counts(data.n_bins[f], {0, 0});
            for (auto r : rows) ++counts[data.rows[r][f]][data.classes[r]];
            double child_entropy = 0.0;
            for (const auto& c : counts) {
                const std::uint64_t ct = c[0] + c[1];
                if (ct == 0) continue;
                child_entropy += static_cast<double>(ct) / static_cast<double>(rows.size()) *
                                 entropy_bits(c[1], ct);
            }
            const double gain = node_entropy - child_entropy;
            if (gain > best_gain) {  // strict: exact ties keep the lowest feature
                best_gain = gain;
                best_feature = static_cast<std::int32_t>(f);
            }
        }
        if (best_feature < 0) return;

        const std::uint32_t f = static_cast<std::uint32_t>(best_feature);
        std::vector<std::vector<std::uint32_t>> buckets(data.n_bins[f]);
        for (auto r : rows) buckets[data.rows[r][f]].push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        const std::uint32_t first = static_cast<std::uint32_t>(nodes.size());
        nodes[me].feature = best_feature;
        nodes[me].first_child = first;
        nodes.resize(nodes.size() + buckets.size());
        const std::uint32_t child_mask = remaining & ~(1u << f);
        for (std::uint32_t b = 0; b < buckets.size(); ++b)
            fill(first + b, std::move(buckets[b]), child_mask);
    }
};

}  // namespace

Tree build_tree(const NominalDataset& data, const std::vector<std::uint32_t>& sample,
                std::uint32_t feature_subset, std::mt19937_64* rng) {
    if (data.n_features() > 31) throw error("too many features for the tree builder");
    TreeBuilder builder{data, feature_subset, rng, {}};
    builder.nodes.emplace_back();
    const std::uint32_t all_mask = (1u << data.n_features()) - 1u;
    builder.fill(0, sample, all_mask);
    Tree t;
    t.nodes = std::move(builder.nodes);
    return t;
}

double Tree::score(const std::vector<std::uint32_t>& row) const {
    std::uint32_t at = 0;
    std::uint64_t pos = nodes[0].pos, total = nodes[0].total;
    while (nodes[at].feature >= 0) {
        const std::uint32_t bin = row[static_cast<std::size_t>(nodes[at].feature)];
        at = nodes[at].first_child + bin;
        if (nodes[at].total > 0) {
            pos = nodes[at].pos;
            total = nodes[at].total;
        }
    }
    return (static_cast<double>(pos) + 1.0) / (static_cast<double>(total) + 2.0);
}

// ---- model training and scoring ----

namespace {

NominalDataset to_nominal(const std::vector<TrainingInstance>& instances,
                          const std::vector<FeatureDisc>& disc) {
    NominalDataset data;
    data.n_bins.resize(kNumFeatures);
    for (std::size_t f = 0; f < kNumFeatures; ++f) data.n_bins[f] = disc[f].n_bins;
    data.rows.reserve(instances.size());
    data.classes.reserve(instances.size());
    for (const auto& inst : instances) {
        data.rows.push_back(discretize_apply(disc, inst.f));
        data.classes.push_back(inst.cls);
    }
    return data;
}

std::uint64_t tree_seed(std::uint64_t seed, std::uint32_t tree_ix) {
    return mix64(seed ^ mix64(static_cast<std::uint64_t>(tree_ix) + 1));
}

}  // namespace

RankerModel train(const std::vector<TrainingInstance>& instances, Algorithm algo,
                  std::uint64_t seed, std::uint32_t k, const RandomForestOptions& rf,
                  unsigned threads) {
    if (instances.empty()) throw error("cannot train on an empty instance set");

    RankerModel model;
    model.algo = algo;
    model.seed = seed;
    model.k = k;
    model.rf = rf;
    model.features = discretize_fit(instances);
    const NominalDataset data = to_nominal(instances, model.features);

    switch (algo) {
        case Algorithm::naive_bayes: {
            model.nb = train_naive_bayes(data);
            break;
        }
        case Algorithm::decision_tree: {
            std::vector<std::uint32_t> all(data.size());
            for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
            model.trees.push_back(build_tree(data, all, kNumFeatures, nullptr));
            break;
        }
        case Algorithm::random_forest: {
            if (rf.n_trees == 0) throw error("random forest needs at least one tree");
            model.trees.resize(rf.n_trees);
            parallel_for(rf.n_trees, threads, [&](std::size_t t) {
                std::mt19937_64 rng(tree_seed(seed, static_cast<std::uint32_t>(t)));
                std::vector<std::uint32_t> sample;
                if (rf.bootstrap) {
                    sample.resize(data.size());
                    std::uniform_int_distribution<std::uint32_t> pick(
                        0, static_cast<std::uint32_t>(data.size()) - 1);
                    for (auto& s : sample) s = pick(rng);
                } else {
                    sample.resize(data.size());
                    for (std::uint32_t i = 0; i < sample.size(); ++i) sample[i] = i;
                }
                model.trees[t] = build_tree(data, sample, rf.feature_subset, &rng);
            });
            break;
        }
    }
    return model;
}

bool RankerModel::trained() const {
    if (features.size() != kNumFeatures) return false;
    if (algo == Algorithm::naive_bayes) return nb.cond.size() == kNumFeatures;
    return !trees.empty();
}

double RankerModel::score(const std::array<double, kNumFeatures>& f) const {
    if (!trained()) throw error("model is not trained (missing discretization map or parameters)");
    const auto row = discretize_apply(features, f);
    switch (algo) {
        case Algorithm::naive_bayes:
            return nb.posteriors(row)[1];
        case Algorithm::decision_tree:
            return trees[0].score(row);
        case Algorithm::random_forest: {
            double sum = 0.0;
            for (const auto& t : trees) sum += t.score(row);
            return sum / static_cast<double>(trees.size());
        }
    }
    throw error("unknown algorithm");
}

std::array<double, 2> RankerModel::nb_posteriors(const std::array<double, kNumFeatures>& f) const {
    if (algo != Algorithm::naive_bayes) throw error("not a naive-bayes model");
    if (!trained()) throw error("model is not trained (missing discretization map or parameters)");
    return nb.posteriors(discretize_apply(features, f));
}

RankedLabels score_candidates(const RankerModel& model, std::vector<CandidateLabel>& candidates) {
    for (auto& c : candidates) c.relevance = model.score(c.f);
    std::sort(candidates.begin(), candidates.end(),
              [](const CandidateLabel& a, const CandidateLabel& b) {
                  if (a.relevance != b.relevance) return a.relevance > b.relevance;
                  return a.label < b.label;
              });
    RankedLabels ranked;
    ranked.reserve(candidates.size());
    for (const auto& c : candidates) ranked.emplace_back(c.label, c.relevance);
    return ranked;
}

// ---- persistence ----

void RankerModel::save(const std::string& path) const {
    BinWriter w(path);
    w.magic(kModelMagic, kModelVersion);
    w.u8(static_cast<std::uint8_t>(algo));
    w.u64(seed);
    w.u32(k);
    w.u32(static_cast<std::uint32_t>(features.size()));
    for (const auto& fd : features) {
        w.u8(fd.numeric ? 1 : 0);
        w.f64_vec(fd.cuts);
        w.u32(fd.n_bins);
    }
    w.u32(rf.n_trees);
    w.u32(rf.feature_subset);
    w.u8(rf.bootstrap ? 1 : 0);
    if (algo == Algorithm::naive_bayes) {
        w.f64(nb.prior[0]);
        w.f64(nb.prior[1]);
        w.u32(static_cast<std::uint32_t>(nb.cond.size()));
        for (const auto& per_feature : nb.cond) {
            w.u32(static_cast<std::uint32_t>(per_feature.size()));
            for (const auto& bin : per_feature) {
                w.f64(bin[0]);
                w.f64(bin[1]);
            }
        }
    } else {
        w.u32(static_cast<std::uint32_t>(trees.size()));
        for (const auto& t : trees) {
            w.u32(static_cast<std::uint32_t>(t.nodes.size()));
            for (const auto& n : t.nodes) {
                w.u32(static_cast<std::uint32_t>(n.feature));
                w.u32(n.first_child);
                w.u64(n.pos);
                w.u64(n.total);
            }
        }
    }
    w.close();
}

RankerModel RankerModel::load(const std::string& path) {
    BinReader r(path);
    r.expect_magic(kModelMagic, kModelVersion);
    RankerModel m;
    const std::uint8_t algo_raw = r.u8();
    if (algo_raw > 2) throw error("corrupt model file: " + path);
    m.algo = static_cast<Algorithm>(algo_raw);
    m.seed = r.u64();
    m.k = r.u32();
    const std::uint32_t n_features = r.u32();
    if (n_features != kNumFeatures) throw error("corrupt model file: " + path);
    m.features.resize(n_features);
    for (auto& fd : m.features) {
        fd.numeric = r.u8() != 0;
        fd.cuts = r.f64_vec();
        fd.n_bins = r.u32();
    }
    m.rf.n_trees = r.u32();
    m.rf.feature_subset = r.u32();
    m.rf.bootstrap = r.u8() != 0;
    if (m.algo == Algorithm::naive_bayes) {
        m.nb.prior[0] = r.f64();
        m.nb.prior[1] = r.f64();
        m.nb.cond.resize(r.u32());
        for (auto& per_feature : m.nb.cond) {
            per_feature.resize(r.u32());
            for (auto& bin : per_feature) {
                bin[0] = r.f64();
                bin[1] = r.f64();
            }
        }
    } else {
        m.trees.resize(r.u32());
        for (auto& t : m.trees) {
            t.nodes.resize(r.u32());
            for (auto& n : t.nodes) {
                n.feature = static_cast<std::int32_t>(r.u32());
                n.first_child = r.u32();
                n.pos = r.u64();
                n.total = r.u64();
            }
        }
    }
    return m;
}

}  // namespace mlabel
