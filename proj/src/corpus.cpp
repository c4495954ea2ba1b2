#include "mlabel/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "mlabel/common.hpp"

namespace mlabel {

using nlohmann::json;

const VocabEntry& LabelVocabulary::at(const LabelId& id) const {
    auto it = entries.find(id);
    if (it == entries.end()) throw error("unknown label: " + id);
    return it->second;
}

LabelSet make_label_set(std::vector<LabelId> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

std::vector<Document> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open corpus file: " + path);

    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw error("malformed corpus line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
            throw error("malformed corpus line " + std::to_string(line_no) +
                        ": expected an object with a string \"id\"");
        Document doc;
        doc.id = rec["id"].get<std::string>();
        if (doc.id.empty())
            throw error("malformed corpus line " + std::to_string(line_no) + ": empty id");
        if (!seen.insert(doc.id).second)
            throw error("duplicate document id \"" + doc.id + "\" at line " + std::to_string(line_no));
        doc.title = rec.value("title", std::string());
        doc.abstract_text = rec.value("abstract", std::string());
        if (rec.contains("labels")) {
            if (!rec["labels"].is_array())
                throw error("malformed corpus line " + std::to_string(line_no) +
                            ": \"labels\" must be an array");
            std::vector<LabelId> labels;
            for (const auto& l : rec["labels"]) {
                if (!l.is_string())
                    throw error("malformed corpus line " + std::to_string(line_no) +
                                ": labels must be strings");
                labels.push_back(l.get<std::string>());
            }
            doc.labels = make_label_set(std::move(labels));
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

void save_corpus(const std::vector<Document>& docs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write corpus file: " + path);
    for (const auto& doc : docs) {
        json rec;
        rec["id"] = doc.id;
        rec["title"] = doc.title;
        rec["abstract"] = doc.abstract_text;
        rec["labels"] = doc.labels;
        out << rec.dump() << "\n";
    }
    if (!out) throw error("write failed: " + path);
}

LabelVocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open vocabulary file: " + path);

    // nlohmann silently keeps the last value for a repeated key, so duplicate
    // LabelIds are caught through the parser callback.
    std::vector<std::string> top_keys;
    json::parser_callback_t cb = [&](int depth, json::parse_event_t event, json& parsed) {
        if (depth == 1 && event == json::parse_event_t::key)
            top_keys.push_back(parsed.get<std::string>());
        return true;
    };
    json root;
    try {
        root = json::parse(in, cb);
    } catch (const json::exception& e) {
        throw error("malformed vocabulary file " + path + ": " + e.what());
    }
    if (!root.is_object()) throw error("vocabulary file must hold a JSON object: " + path);
    {
        std::unordered_set<std::string> uniq;
        for (const auto& k : top_keys)
            if (!uniq.insert(k).second) throw error("duplicate label id \"" + k + "\" in " + path);
    }

    LabelVocabulary vocab;
    for (const auto& [id, val] : root.items()) {
        if (!val.is_object() || !val.contains("name") || !val["name"].is_string())
            throw error("vocabulary entry \"" + id + "\" must be an object with a string \"name\"");
        VocabEntry entry;
        entry.name = val["name"].get<std::string>();
        if (entry.name.empty()) throw error("vocabulary entry \"" + id + "\" has an empty name");
        if (val.contains("entries")) {
            if (!val["entries"].is_array())
                throw error("vocabulary entry \"" + id + "\": \"entries\" must be an array");
            for (const auto& e : val["entries"]) {
                if (!e.is_string())
                    throw error("vocabulary entry \"" + id + "\": entries must be strings");
                entry.entries.push_back(e.get<std::string>());
            }
        }
        entry.name_terms = preprocess(entry.name);
        for (const auto& e : entry.entries) entry.entry_terms.push_back(preprocess(e));
        vocab.entries.emplace(id, std::move(entry));
    }
    return vocab;
}

void save_vocabulary(const LabelVocabulary& vocab, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write vocabulary file: " + path);
    json root = json::object();
    for (const auto& [id, entry] : vocab.entries) {
        json e;
        e["name"] = entry.name;
        e["entries"] = entry.entries;
        root[id] = std::move(e);
    }
    out << root.dump(2) << "\n";
    if (!out) throw error("write failed: " + path);
}

std::map<std::string, std::uint32_t> term_vector(const Document& doc, const StopwordSet& stopwords) {
    std::map<std::string, std::uint32_t> counts;
    for (auto& term : preprocess(doc.title + " " + doc.abstract_text, stopwords)) ++counts[term];
    return counts;
}

}  // namespace mlabel
