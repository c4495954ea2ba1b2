#include "mlabel/text.hpp"

#include <iostream>

#include "mlabel/common.hpp"
#include "mlabel/porter.hpp"

namespace mlabel {

void log_warn(const std::string& msg) { std::cerr << "[mlabel] warning: " << msg << "\n"; }
void log_info(const std::string& msg) { std::cerr << "[mlabel] " << msg << "\n"; }

namespace {

inline bool is_alnum_ascii(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline char lower_ascii(unsigned char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (is_alnum_ascii(c)) {
            cur.push_back(lower_ascii(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string normalize_token(const std::string& token) {
    // Porter is not idempotent on every word ("conflated" -> "conflate" ->
    // "conflat"), so iterate to the fixed point the TermList contract needs.
    std::string cur = porter::stem(token);
    for (int i = 0; i < 4; ++i) {
        std::string next = porter::stem(cur);
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

TermList preprocess(const std::string& text, const StopwordSet& stopwords) {
    TermList out;
    for (auto& tok : tokenize(text)) {
        if (stopwords.count(tok)) continue;
        std::string stemmed = normalize_token(tok);
        if (stemmed.empty() || stopwords.count(stemmed)) continue;
        out.push_back(std::move(stemmed));
    }
    return out;
}

std::string join_terms(const TermList& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out.push_back(' ');
        out += terms[i];
    }
    return out;
}

}  // namespace mlabel
