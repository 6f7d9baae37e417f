#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ckws {

// All library failures surface as ckws::error (usage problems) or the
// derived budget_error (memory planner refusals).
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct budget_error : error {
    uint64_t required_bytes;
    uint64_t budget_bytes;
    budget_error(const std::string& what, uint64_t required, uint64_t budget)
        : error(what), required_bytes(required), budget_bytes(budget) {}
};

using rng_t = std::mt19937_64;

// Uniform integer in [0, n). Hand-rolled (rejection-free modulo is fine at
// our scales) so sequences do not depend on the standard library's
// distribution implementations.
inline uint64_t uniform_below(rng_t& rng, uint64_t n) {
    return rng() % n;
}

inline double uniform_unit(rng_t& rng) {
    return (rng() >> 11) * 0x1.0p-53;  // 53 random bits in [0,1)
}

// Fisher-Yates; std::shuffle is implementation-defined, this one is pinned.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, rng_t& rng) {
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

// k distinct values from [0, n), in draw order.
std::vector<uint64_t> sample_without_replacement(uint64_t n, uint64_t k, rng_t& rng);

// Splits [0, total) into contiguous chunks and runs fn(begin, end) on a small
// pool. fn must only write to disjoint, index-owned state; results are then
// identical for any worker count. workers == 0 picks hardware concurrency.
void parallel_for(size_t total, size_t workers, const std::function<void(size_t, size_t)>& fn);

size_t resolve_workers(size_t workers);

std::string to_hex(const uint8_t* data, size_t len);
std::vector<uint8_t> from_hex(const std::string& hex);

// Shortest decimal form that round-trips a double; used everywhere results
// are persisted so reruns are byte-identical.
std::string format_double(double x);

std::string human_bytes(uint64_t bytes);

}  // namespace ckws
