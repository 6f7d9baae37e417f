#include "ckws/conjunction.hpp"

#include <algorithm>
#include <iostream>

namespace ckws {

uint64_t binomial(uint64_t v, uint64_t d) {
    if (d > v) throw error("binomial: d=" + std::to_string(d) + " exceeds v=" + std::to_string(v));
    if (d > v - d) d = v - d;
    unsigned __int128 result = 1;
    for (uint64_t i = 1; i <= d; ++i) {
        result = result * (v - d + i) / i;  // divisible at every step
        if (result > UINT64_MAX)
            throw error("binomial overflow: C(" + std::to_string(v) + "," + std::to_string(d) + ")");
    }
    return static_cast<uint64_t>(result);
}

ConjunctionSet::ConjunctionSet(Vocabulary vocab, uint32_t d, bool allow_large_d)
    : vocab_(std::move(vocab)), d_(d) {
    if (d_ == 0) throw error("conjunction arity d must be positive");
    if (d_ > vocab_.size())
        throw error("conjunction arity d=" + std::to_string(d_) + " exceeds vocabulary size " +
                    std::to_string(vocab_.size()));
    if (d_ > 3) {
        if (!allow_large_d)
            throw error("d=" + std::to_string(d_) +
                        " is outside the validated range {1,2,3}; pass allow_large_d to override");
        std::cerr << "warning: d=" << d_ << " makes the conjunction space combinatorially large\n";
    }
    m_ = binomial(vocab_.size(), d_);
    // Table of C(n,k) for k <= d, used by rank/unrank. Overflow cannot occur
    // below the already-checked C(v,d).
    choose_.assign(static_cast<size_t>(vocab_.size() + 1) * (d_ + 1), 0);
    for (uint32_t n = 0; n <= vocab_.size(); ++n) {
        choose_[n * (d_ + 1) + 0] = 1;
        for (uint32_t k = 1; k <= d_ && k <= n; ++k) {
            if (n == k) {
                choose_[n * (d_ + 1) + k] = 1;
                continue;
            }
            uint64_t a = choose_[(n - 1) * (d_ + 1) + k - 1];
            uint64_t b = choose_[(n - 1) * (d_ + 1) + k];
            if (a + b < a) throw error("binomial table overflow at C(" + std::to_string(n) + "," +
                                       std::to_string(k) + ")");
            choose_[n * (d_ + 1) + k] = a + b;
        }
    }
}

void ConjunctionSet::validate(const Conjunction& c) const {
    if (c.size() != d_)
        throw error("conjunction has " + std::to_string(c.size()) + " indices, expected d=" +
                    std::to_string(d_));
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= vocab_.size()) throw error("conjunction index out of vocabulary range");
        if (i > 0 && c[i] <= c[i - 1]) throw error("conjunction indices must be strictly increasing");
    }
}

uint64_t ConjunctionSet::rank(const Conjunction& c) const {
    validate(c);
    // Lexicographic rank of a strictly increasing tuple:
    //   rank = C(v,d) - 1 - sum_j C(v-1-c_j, d-j)
    uint64_t sum = 0;
    for (uint32_t j = 0; j < d_; ++j) {
        uint32_t remaining = vocab_.size() - 1 - c[j];
        uint32_t need = d_ - j;
        sum += (need <= remaining) ? choose(remaining, need) : 0;
    }
    return m_ - 1 - sum;
}

Conjunction ConjunctionSet::unrank(uint64_t i) const {
    if (i >= m_) throw error("unrank: index " + std::to_string(i) + " out of range [0," +
                             std::to_string(m_) + ")");
    Conjunction c(d_);
    uint64_t remaining = i;
    uint32_t x = 0;
    for (uint32_t j = 0; j < d_; ++j) {
        // Advance x while all completions starting at x are ranked before i.
        while (true) {
            if (x >= vocab_.size()) throw error("unrank: internal inconsistency");
            uint32_t rest = vocab_.size() - 1 - x;
            uint32_t need = d_ - 1 - j;
            uint64_t block = (need <= rest) ? choose(rest, need) : 0;
            if (remaining < block) break;
            remaining -= block;
            ++x;
        }
        c[j] = x++;
    }
    return c;
}

std::vector<std::string> ConjunctionSet::keywords(uint64_t i) const {
    Conjunction c = unrank(i);
    std::vector<std::string> out;
    out.reserve(d_);
    for (uint32_t idx : c) out.push_back(vocab_.keyword(idx));
    return out;
}

std::string ConjunctionSet::to_string(uint64_t i) const {
    Conjunction c = unrank(i);
    std::string out;
    for (size_t j = 0; j < c.size(); ++j) {
        if (j > 0) out += "∧";
        out += vocab_.keyword(c[j]);
    }
    return out;
}

bool contains_all(const Document& doc, const Conjunction& c, const Vocabulary& vocab) {
    for (uint32_t idx : c) {
        if (idx >= vocab.size()) throw error("contains_all: index out of vocabulary range");
        if (!doc.contains(vocab.keyword(idx))) return false;
    }
    return true;
}

}  // namespace ckws
