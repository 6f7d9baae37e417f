#pragma once

#include <string>
#include <unordered_set>

namespace ckws {

// Classic Porter (1980) suffix stripper, matching the author's reference C
// release (including its two documented departures, bli->ble and logi->log).
// Input must already be lowercase ASCII letters.
std::string porter_stem(const std::string& word);

// Standard English stopword list (the 179-entry NLTK set).
const std::unordered_set<std::string>& english_stopwords();

bool is_stopword(const std::string& word);

}  // namespace ckws
