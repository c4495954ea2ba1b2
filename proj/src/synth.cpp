#include "mlabel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mlabel/common.hpp"

namespace mlabel {

namespace {

std::string topic_label(std::size_t t, std::size_t n_topics) {
    std::string num = std::to_string(t + 1);
    const std::size_t width = std::to_string(n_topics).size();
    return "T" + std::string(width - num.size(), '0') + num;
}

std::string sig_term(std::size_t topic, std::size_t slot) {
    return "sig" + std::to_string(topic) + "x" + std::to_string(slot);
}

std::string noise_term(std::size_t i) { return "nz" + std::to_string(i); }

Document make_doc(const std::string& id, const SynthConfig& cfg,
                  std::discrete_distribution<std::size_t>& topic_dist, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> n_topics_dist(cfg.min_topics, cfg.max_topics);
    std::uniform_int_distribution<std::size_t> len_dist(cfg.min_tokens, cfg.max_tokens);
    std::uniform_int_distribution<std::size_t> noise_dist(0, cfg.noise_vocab - 1);

    const std::size_t n_topics = n_topics_dist(rng);
    std::size_t total = len_dist(rng);
    if (total < n_topics * cfg.sig_len + 1) total = n_topics * cfg.sig_len + 1;

    // sample distinct topics: popularity-skewed entry points, then siblings
    // from already-sampled clusters with probability cluster_affinity
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::size_t> topics;
    auto has = [&](std::size_t t) {
        return std::find(topics.begin(), topics.end(), t) != topics.end();
    };
    while (topics.size() < n_topics) {
        std::size_t pick;
        if (!topics.empty() && cfg.cluster_size > 1 && coin(rng) < cfg.cluster_affinity) {
            std::uniform_int_distribution<std::size_t> member_of(0, topics.size() - 1);
            const std::size_t base =
                topics[member_of(rng)] / cfg.cluster_size * cfg.cluster_size;
            std::uniform_int_distribution<std::size_t> sibling(0, cfg.cluster_size - 1);
            pick = std::min(base + sibling(rng), cfg.topics - 1);
        } else {
            pick = topic_dist(rng);
        }
        if (!has(pick)) topics.push_back(pick);
    }

    Document doc;
    doc.id = id;
    std::vector<LabelId> labels;
    for (auto t : topics) labels.push_back(topic_label(t, cfg.topics));
    doc.labels = make_label_set(std::move(labels));

    // title: full signature of the first sampled topic
    for (std::size_t j = 0; j < cfg.sig_len; ++j) {
        if (j) doc.title += " ";
        doc.title += sig_term(topics[0], j);
    }

    // abstract: remaining signatures (terms kept pairwise adjacent) + noise,
    // shuffled at unit granularity
    std::vector<std::vector<std::string>> units;
    for (std::size_t i = 1; i < topics.size(); ++i) {
        for (std::size_t j = 0; j < cfg.sig_len; j += 2) {
            if (j + 1 < cfg.sig_len)
                units.push_back({sig_term(topics[i], j), sig_term(topics[i], j + 1)});
            else
                units.push_back({sig_term(topics[i], j)});
        }
    }
    const std::size_t noise_tokens = total - n_topics * cfg.sig_len;
    std::uniform_real_distribution<double> unit_interval(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> any_topic(0, cfg.topics - 1);
    std::uniform_int_distribution<std::size_t> any_slot(0, cfg.sig_len - 1);
    for (std::size_t i = 0; i < noise_tokens; ++i) {
        if (unit_interval(rng) < cfg.sig_noise_share)
            units.push_back({sig_term(any_topic(rng), any_slot(rng))});
        else
            units.push_back({noise_term(noise_dist(rng))});
    }
    std::shuffle(units.begin(), units.end(), rng);

    for (const auto& unit : units)
        for (const auto& tok : unit) {
            if (!doc.abstract_text.empty()) doc.abstract_text += " ";
            doc.abstract_text += tok;
        }
    return doc;
}

}  // namespace

SynthData generate_planted(const SynthConfig& cfg) {
    if (cfg.topics == 0 || cfg.sig_len == 0) throw error("bad synth config");
    if (cfg.min_topics < 1 || cfg.min_topics > cfg.max_topics || cfg.max_topics > cfg.topics)
        throw error("bad synth config: topic counts");

    SynthData data;
    for (std::size_t t = 0; t < cfg.topics; ++t) {
        VocabEntry entry;
        const bool named = cfg.named_every > 0 && t % cfg.named_every == 0;
        if (named) {
            entry.name = sig_term(t, 0) + " " + sig_term(t, 1);
            if (cfg.sig_len >= 4) entry.entries.push_back(sig_term(t, 2) + " " + sig_term(t, 3));
        } else {
            // opaque descriptor name; its tokens never occur in documents
            entry.name = "lbl" + std::to_string(t) + "a lbl" + std::to_string(t) + "b";
        }
        entry.name_terms = preprocess(entry.name);
        for (const auto& e : entry.entries) entry.entry_terms.push_back(preprocess(e));
        data.vocab.entries.emplace(topic_label(t, cfg.topics), std::move(entry));
    }

    std::mt19937_64 rng(mix64(cfg.seed));
    std::vector<double> weights(cfg.topics);
    for (std::size_t t = 0; t < cfg.topics; ++t)
        weights[t] = 1.0 / std::pow(static_cast<double>(t + 1), cfg.topic_skew);
    std::discrete_distribution<std::size_t> topic_dist(weights.begin(), weights.end());

    const std::size_t width = std::to_string(cfg.train_docs + cfg.test_docs).size();
    auto pad = [&](std::size_t i) {
        std::string n = std::to_string(i + 1);
        return std::string(width - n.size(), '0') + n;
    };
    data.train.reserve(cfg.train_docs);
    for (std::size_t i = 0; i < cfg.train_docs; ++i)
        data.train.push_back(make_doc("tr" + pad(i), cfg, topic_dist, rng));
    data.test.reserve(cfg.test_docs);
    for (std::size_t i = 0; i < cfg.test_docs; ++i)
        data.test.push_back(make_doc("te" + pad(i), cfg, topic_dist, rng));
    return data;
}

std::vector<Document> generate_uniform(std::uint64_t seed, std::size_t n_docs,
                                       std::size_t tokens_per_doc, std::size_t vocab_size) {
    std::mt19937_64 rng(mix64(seed));
    std::uniform_int_distribution<std::size_t> term(0, vocab_size - 1);
    std::vector<Document> docs(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        docs[i].id = "u" + std::to_string(i);
        std::string& text = docs[i].abstract_text;
        text.reserve(tokens_per_doc * 7);
        for (std::size_t t = 0; t < tokens_per_doc; ++t) {
            if (t) text += " ";
            text += "w" + std::to_string(term(rng));
        }
        docs[i].title = "u" + std::to_string(i) + "t";
    }
    return docs;
}

}  // namespace mlabel
