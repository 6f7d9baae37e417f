#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ckws/corpus.hpp"

namespace ckws {

// Exact binomial coefficient; throws on d > v and on uint64 overflow
// (never wraps silently).
uint64_t binomial(uint64_t v, uint64_t d);

// A conjunction is a strictly increasing tuple of d vocabulary indices.
using Conjunction = std::vector<uint32_t>;

// The lexicographically ordered set of all d-subsets of a vocabulary.
// Conjunction identities are integer ranks; keyword tuples are materialized
// only at the edges (trapdoor derivation, reporting).
class ConjunctionSet {
  public:
    ConjunctionSet(Vocabulary vocab, uint32_t d, bool allow_large_d = false);

    uint32_t v() const { return vocab_.size(); }
    uint32_t d() const { return d_; }
    uint64_t m() const { return m_; }
    const Vocabulary& vocab() const { return vocab_; }

    uint64_t rank(const Conjunction& c) const;
    Conjunction unrank(uint64_t i) const;

    void validate(const Conjunction& c) const;

    // Keywords of the conjunction at rank i, in vocabulary-index order.
    std::vector<std::string> keywords(uint64_t i) const;
    std::string to_string(uint64_t i) const;  // "kw1∧kw2∧..."

  private:
    Vocabulary vocab_;
    uint32_t d_;
    uint64_t m_;
    std::vector<uint64_t> choose_;  // C(n, k) for n <= v, k <= d, row-major (d+1 per n)

    uint64_t choose(uint32_t n, uint32_t k) const { return choose_[n * (d_ + 1) + k]; }
};

// True iff every keyword of c (resolved through vocab) occurs in doc.
bool contains_all(const Document& doc, const Conjunction& c, const Vocabulary& vocab);

}  // namespace ckws
