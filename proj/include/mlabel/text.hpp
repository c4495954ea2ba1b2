#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace mlabel {

using TermList = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

// Bundled English stopword list (see src/stopwords.cpp, list version v1).
const StopwordSet& default_stopwords();

// Splits on any non-ASCII-alphanumeric byte and lowercases. Pure digit runs
// are kept as tokens.
std::vector<std::string> tokenize(const std::string& text);

// Full pipeline: tokenize, drop stopwords, Porter-stem. Output terms are
// stemmer fixed points and never stopwords, which makes the pipeline
// idempotent on its own space-joined output.
TermList preprocess(const std::string& text, const StopwordSet& stopwords = default_stopwords());

// Stems a lowercase token to a fixed point of porter::stem.
std::string normalize_token(const std::string& token);

std::string join_terms(const TermList& terms);

}  // namespace mlabel
