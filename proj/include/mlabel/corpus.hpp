#pragma once

#include <map>
#include <string>
#include <vector>

#include "mlabel/text.hpp"

namespace mlabel {

using LabelId = std::string;
using LabelSet = std::vector<LabelId>;  // kept sorted and deduplicated

struct Document {
    std::string id;
    std::string title;
    std::string abstract_text;
    LabelSet labels;
};

struct VocabEntry {
    std::string name;                     // preferred name, raw
    std::vector<std::string> entries;     // entry terms, raw
    TermList name_terms;                  // preprocess(name)
    std::vector<TermList> entry_terms;    // preprocess of each entry
};

struct LabelVocabulary {
    std::map<LabelId, VocabEntry> entries;

    bool contains(const LabelId& id) const { return entries.count(id) != 0; }
    const VocabEntry& at(const LabelId& id) const;
    std::size_t size() const { return entries.size(); }
};

LabelSet make_label_set(std::vector<LabelId> labels);

// JSON Lines, one {"id","title","abstract","labels"} object per line.
// Rejects malformed lines (by line number) and duplicate ids.
std::vector<Document> load_corpus(const std::string& path);
void save_corpus(const std::vector<Document>& docs, const std::string& path);

// JSON object {"<LabelId>": {"name": ..., "entries": [...]}, ...}; entry
// terms are preprocessed at load for the lexical feature matching.
LabelVocabulary load_vocabulary(const std::string& path);
void save_vocabulary(const LabelVocabulary& vocab, const std::string& path);

// Raw term counts over preprocess(title + " " + abstract).
std::map<std::string, std::uint32_t> term_vector(const Document& doc,
                                                 const StopwordSet& stopwords = default_stopwords());

}  // namespace mlabel
