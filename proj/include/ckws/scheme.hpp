#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "ckws/conjunction.hpp"
#include "ckws/corpus.hpp"

namespace ckws {

// Opaque search token. 128 bits keeps accidental collisions out of reach at
// any vocabulary size this tool handles; uniqueness is still asserted when
// observations are generated.
using Token = std::array<uint8_t, 16>;

struct TokenHash {
    size_t operator()(const Token& t) const {
        uint64_t x;
        std::memcpy(&x, t.data(), sizeof(x));
        return static_cast<size_t>(x);
    }
};

struct SecretKey {
    uint64_t k0 = 0;
    uint64_t k1 = 0;
};

// Deterministic keyed digest of the canonicalized keyword set. Keywords are
// sorted before hashing, so any ordering of the same set collides by design
// (search-pattern leakage) while different sets get unlinkable tokens.
// Simulation-grade: SipHash-2-4 in two domain-separated passes.
Token make_trapdoor(const SecretKey& key, std::span<const std::string> keywords);

struct Observation {
    Token token{};
    std::vector<int32_t> ids;  // sorted ascending
};

// The attacker's complete view: distinct trapdoors with their result-id sets.
struct ObservationLog {
    std::vector<Observation> observations;

    size_t l() const { return observations.size(); }
    // token -> position in the log
    std::unordered_map<Token, uint32_t, TokenHash> token_positions() const;
};

// Sealed evaluation-side record: which conjunction each token really is.
// Never handed to the attack; used only for KnownQ sampling and scoring.
struct GroundTruth {
    struct Entry {
        uint64_t real_rank = 0;
        std::vector<std::string> keywords;  // resolved through the real vocabulary
    };
    std::unordered_map<Token, Entry, TokenHash> entries;

    const Entry& at(const Token& t) const;
};

struct KnownQueryPair {
    uint64_t attacker_rank = 0;  // rank within the attacker's conjunction set
    Token token{};
};

// Simulated secure d-conjunctive keyword search scheme over the real corpus.
// Exposes exactly the common access pattern: ids of documents matching all
// d keywords of a queried conjunction.
class SchemeInstance {
  public:
    SchemeInstance(const Corpus& real_corpus, Vocabulary vocab, uint32_t d, SecretKey key);

    const ConjunctionSet& conjunctions() const { return set_; }
    uint32_t n_real() const { return static_cast<uint32_t>(doc_ids_.size()); }

    std::vector<int32_t> search(const Token& td) const;
    Token trapdoor_for_rank(uint64_t rank) const;

  private:
    friend std::pair<ObservationLog, GroundTruth> sample_queries(const SchemeInstance&, double,
                                                                 uint64_t);
    ConjunctionSet set_;
    SecretKey key_;
    Postings postings_;                 // per-keyword document bitsets
    std::vector<int32_t> doc_ids_;      // bit position -> document id
    std::unordered_map<Token, uint64_t, TokenHash> token_to_rank_;  // non-empty results only

    std::vector<int32_t> result_for_rank(uint64_t rank) const;
};

SchemeInstance build_index(const Corpus& real_corpus, const Vocabulary& vocab, uint32_t d,
                           SecretKey key);

// Draws round(fraction*m) distinct conjunctions uniformly from the scheme's
// query space and emits their observations, plus the sealed ground truth.
std::pair<ObservationLog, GroundTruth> sample_queries(const SchemeInstance& instance,
                                                      double fraction, uint64_t seed);

// k known (conjunction, trapdoor) pairs drawn uniformly from the observed
// trapdoors whose true conjunction exists in the attacker's conjunction set.
std::vector<KnownQueryPair> sample_known_queries(const ObservationLog& log,
                                                 const ConjunctionSet& attacker_set,
                                                 const GroundTruth& truth, size_t k,
                                                 uint64_t seed);

// Attacker-input files: observations as "token-hex id id ...", known pairs
// as "rank token-hex". Together they allow replaying an attack without the
// simulator.
void save_observations(const ObservationLog& log, const std::filesystem::path& path);
ObservationLog load_observations(const std::filesystem::path& path);
void save_known_queries(std::span<const KnownQueryPair> known, const std::filesystem::path& path);
std::vector<KnownQueryPair> load_known_queries(const std::filesystem::path& path);

}  // namespace ckws
