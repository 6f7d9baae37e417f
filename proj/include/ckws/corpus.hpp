#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ckws/util.hpp"

namespace ckws {

// One indexed document: a deduplicated, stemmed, stopword-free keyword set.
struct Document {
    int32_t doc_id = 0;
    std::string source;                  // originating filename, if any
    std::vector<std::string> keywords;   // sorted, unique

    bool contains(const std::string& kw) const;
};

struct Corpus {
    std::vector<Document> docs;

    size_t size() const { return docs.size(); }
    bool empty() const { return docs.empty(); }
};

struct ExtractionConfig {
    bool email_mode = false;      // strip RFC-822 style headers up to first blank line
    size_t min_token_len = 3;     // applied before stemming
    bool stem = true;             // Porter
    bool drop_stopwords = true;   // English list
    size_t workers = 0;
};

// Keyword extraction pipeline: split on non-alphabetic bytes, lowercase,
// length filter, stopword filter, stem, dedup. Returns a sorted unique set.
std::vector<std::string> extract_keywords(const std::string& text, const ExtractionConfig& cfg);

// One Document per readable file in the directory, doc_id assigned by sorted
// filename. Throws on an empty or missing directory and on unreadable files.
Corpus ingest(const std::filesystem::path& directory, const ExtractionConfig& cfg);

size_t distinct_keyword_count(const Corpus& corpus);

// Writes one line per document: doc_id, source filename, keyword count.
void write_corpus_manifest(const Corpus& corpus, const std::filesystem::path& out);

class Vocabulary {
  public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> keywords);

    uint32_t size() const { return static_cast<uint32_t>(keywords_.size()); }
    const std::string& keyword(uint32_t idx) const { return keywords_[idx]; }
    const std::vector<std::string>& keywords() const { return keywords_; }
    std::optional<uint32_t> index_of(const std::string& kw) const;

  private:
    std::vector<std::string> keywords_;
    std::unordered_map<std::string, uint32_t> index_;
};

// Top-v keywords by document frequency, ties broken lexicographically.
Vocabulary build_vocabulary(const Corpus& corpus, uint32_t v);

enum class SplitMode { similar, p_known };

struct SplitSpec {
    SplitMode mode = SplitMode::similar;
    double similar_fraction = 0.4;  // attacker share in similar mode
    double p = 0.0;                 // known-documents rate in p_known mode
    uint64_t seed = 0;
};

// Returns (attacker_corpus, real_corpus). similar: disjoint partition with
// |attacker| = round(fraction*n). p_known: real is the whole corpus and the
// attacker holds a uniform subset of round(p*n) documents.
std::pair<Corpus, Corpus> split(const Corpus& corpus, const SplitSpec& spec);

// Per-keyword document bitsets, column-contiguous. words() 64-bit words per
// keyword column.
class Postings {
  public:
    Postings() = default;
    Postings(const Corpus& corpus, const Vocabulary& vocab);

    uint32_t n_docs() const { return n_docs_; }
    size_t words() const { return words_; }
    const uint64_t* column(uint32_t kw) const { return bits_.data() + kw * words_; }
    uint64_t bytes() const { return bits_.size() * sizeof(uint64_t); }

  private:
    uint32_t n_docs_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> bits_;
};

}  // namespace ckws
