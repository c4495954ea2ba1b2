#pragma once

#include <string>

namespace mlabel::porter {

// One pass of the Porter (1980) suffix-stripping algorithm over a lowercase
// token. Words of length <= 2 are returned unchanged. Non-letter characters
// are treated as consonants, so digit-bearing tokens pass through untouched
// unless they happen to end in a rule suffix.
std::string stem(const std::string& word);

}  // namespace mlabel::porter
