#include "ckws/cooccurrence.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <unordered_map>

namespace ckws {
namespace {

constexpr char kMatrixMagic[8] = {'C', 'K', 'W', 'S', 'C', 'O', 'O', 'C'};
constexpr size_t kTile = 64;  // columns per tile; pairs of tiles fit in L2

inline uint64_t intersection_count(const uint64_t* a, const uint64_t* b, size_t words) {
    uint64_t count = 0;
    for (size_t w = 0; w < words; ++w) count += static_cast<uint64_t>(std::popcount(a[w] & b[w]));
    return count;
}

// Shared pairwise kernel: out[i,j] = |row_i & row_j| / scale_n over the upper
// triangle of tile pairs, mirrored into the lower triangle. Writes of
// distinct tile pairs are disjoint, so the tiling is safe to parallelize and
// bit-identical to a direct double loop (integer counts, one final scale).
template <typename Bitsets>
CooccurrenceMatrix pairwise_scaled_counts(const Bitsets& sets, double n, MemoryBudget budget,
                                          size_t workers, const char* what) {
    const uint64_t dim = sets.items();
    const size_t words = sets.words();

    uint64_t output_bytes = dim * dim * sizeof(double);
    uint64_t required = output_bytes + sets.bytes();
    if (required > budget.bytes) {
        std::string msg = std::string(what) + ": needs " + human_bytes(required) + " (" +
                          human_bytes(output_bytes) + " output + " + human_bytes(sets.bytes()) +
                          " bitsets) but the budget is " + human_bytes(budget.bytes) +
                          "; raise the budget to at least " + human_bytes(required) +
                          " or use the byte estimator to replan the experiment";
        throw budget_error(msg, required, budget.bytes);
    }

    CooccurrenceMatrix out(dim, n);
    const uint64_t tiles = (dim + kTile - 1) / kTile;
    // Upper-triangular tile pair list.
    std::vector<std::pair<uint64_t, uint64_t>> tasks;
    tasks.reserve(tiles * (tiles + 1) / 2);
    for (uint64_t bi = 0; bi < tiles; ++bi)
        for (uint64_t bj = bi; bj < tiles; ++bj) tasks.emplace_back(bi, bj);

    parallel_for(tasks.size(), workers, [&](size_t begin, size_t end) {
        for (size_t t = begin; t < end; ++t) {
            auto [bi, bj] = tasks[t];
            uint64_t i_end = std::min(dim, (bi + 1) * kTile);
            uint64_t j_end = std::min(dim, (bj + 1) * kTile);
            for (uint64_t i = bi * kTile; i < i_end; ++i) {
                uint64_t j0 = (bi == bj) ? i : bj * kTile;
                const uint64_t* ri = sets.row(i);
                for (uint64_t j = j0; j < j_end; ++j) {
                    double v = static_cast<double>(intersection_count(ri, sets.row(j), words)) / n;
                    out.at(i, j) = v;
                    out.at(j, i) = v;
                }
            }
        }
    });
    return out;
}

}  // namespace

CooccurrenceMatrix::CooccurrenceMatrix(uint64_t dim, double scale_n)
    : dim_(dim), scale_(scale_n), values_(dim * dim, 0.0) {}

void CooccurrenceMatrix::column(uint64_t j, double* out) const {
    // Symmetric: column j equals row j.
    std::memcpy(out, values_.data() + j * dim_, dim_ * sizeof(double));
}

void CooccurrenceMatrix::save(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error("cannot write matrix file: " + path.string());
    f.write(kMatrixMagic, sizeof(kMatrixMagic));
    uint64_t dim = dim_;
    double scale = scale_;
    uint32_t width = sizeof(double);
    uint32_t reserved = 0;
    f.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    f.write(reinterpret_cast<const char*>(&scale), sizeof(scale));
    f.write(reinterpret_cast<const char*>(&width), sizeof(width));
    f.write(reinterpret_cast<const char*>(&reserved), sizeof(reserved));
    f.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!f) throw error("write failure on matrix file: " + path.string());
}

CooccurrenceMatrix CooccurrenceMatrix::load(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw error("cannot read matrix file: " + path.string());
    char magic[8];
    f.read(magic, sizeof(magic));
    if (!f || std::memcmp(magic, kMatrixMagic, sizeof(magic)) != 0)
        throw error("not a co-occurrence matrix file: " + path.string());
    uint64_t dim;
    double scale;
    uint32_t width, reserved;
    f.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    f.read(reinterpret_cast<char*>(&scale), sizeof(scale));
    f.read(reinterpret_cast<char*>(&width), sizeof(width));
    f.read(reinterpret_cast<char*>(&reserved), sizeof(reserved));
    if (!f || width != sizeof(double)) throw error("unsupported matrix file: " + path.string());
    CooccurrenceMatrix out(dim, scale);
    f.read(reinterpret_cast<char*>(out.values_.data()),
           static_cast<std::streamsize>(out.values_.size() * sizeof(double)));
    if (!f) throw error("truncated matrix file: " + path.string());
    return out;
}

ConjunctionPostings::ConjunctionPostings(const Corpus& corpus, const ConjunctionSet& set)
    : items_(set.m()), words_((corpus.size() + 63) / 64), n_docs_(static_cast<uint32_t>(corpus.size())) {
    Postings keyword_bits(corpus, set.vocab());
    bits_.assign(items_ * words_, 0);
    for (uint64_t rank = 0; rank < items_; ++rank) {
        Conjunction c = set.unrank(rank);
        uint64_t* dst = bits_.data() + rank * words_;
        std::copy_n(keyword_bits.column(c[0]), words_, dst);
        for (uint32_t j = 1; j < set.d(); ++j) {
            const uint64_t* col = keyword_bits.column(c[j]);
            for (size_t w = 0; w < words_; ++w) dst[w] &= col[w];
        }
    }
}

ResultBitsets::ResultBitsets(const ObservationLog& log) : items_(log.l()) {
    // Compact DocumentIDs space: union of all observed result sets.
    std::unordered_map<int32_t, uint32_t> position;
    for (const Observation& obs : log.observations)
        for (int32_t id : obs.ids) position.emplace(id, 0);
    std::vector<int32_t> ids;
    ids.reserve(position.size());
    for (auto& [id, _] : position) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (uint32_t i = 0; i < ids.size(); ++i) position[ids[i]] = i;

    union_size_ = ids.size();
    words_ = (union_size_ + 63) / 64;
    if (words_ == 0) words_ = 1;  // all result sets empty; keep rows addressable
    bits_.assign(items_ * words_, 0);
    for (uint64_t i = 0; i < items_; ++i) {
        uint64_t* row = bits_.data() + i * words_;
        for (int32_t id : log.observations[i].ids) {
            uint32_t p = position[id];
            row[p / 64] |= uint64_t(1) << (p % 64);
        }
    }
}

CooccurrenceMatrix build_conjunction_cooccurrence(const Corpus& attacker_corpus,
                                                  const ConjunctionSet& set, MemoryBudget budget,
                                                  size_t workers) {
    if (attacker_corpus.empty()) throw error("build_conjunction_cooccurrence: empty corpus");
    ConjunctionPostings postings(attacker_corpus, set);
    return pairwise_scaled_counts(postings, static_cast<double>(attacker_corpus.size()), budget,
                                  workers, "conjunction co-occurrence");
}

CooccurrenceMatrix build_trapdoor_cooccurrence(const ObservationLog& log, uint32_t n_real,
                                               MemoryBudget budget, size_t workers) {
    if (n_real == 0) throw error("build_trapdoor_cooccurrence: n_real must be positive");
    if (log.observations.empty()) throw error("build_trapdoor_cooccurrence: empty observation log");
    ResultBitsets sets(log);
    return pairwise_scaled_counts(sets, static_cast<double>(n_real), budget, workers,
                                  "trapdoor co-occurrence");
}

LazyConjunctionCooccurrence::LazyConjunctionCooccurrence(const Corpus& attacker_corpus,
                                                         const ConjunctionSet& set, size_t workers)
    : postings_(attacker_corpus, set), scale_(static_cast<double>(attacker_corpus.size())),
      workers_(workers) {
    if (attacker_corpus.empty()) throw error("LazyConjunctionCooccurrence: empty corpus");
}

void LazyConjunctionCooccurrence::column(uint64_t j, double* out) const {
    const uint64_t* rj = postings_.row(j);
    const size_t words = postings_.words();
    parallel_for(postings_.items(), workers_, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i)
            out[i] = static_cast<double>(intersection_count(postings_.row(i), rj, words)) / scale_;
    });
}

LazyTrapdoorCooccurrence::LazyTrapdoorCooccurrence(const ObservationLog& log, uint32_t n_real,
                                                   size_t workers)
    : bitsets_(log), scale_(static_cast<double>(n_real)), workers_(workers) {
    if (n_real == 0) throw error("LazyTrapdoorCooccurrence: n_real must be positive");
}

void LazyTrapdoorCooccurrence::column(uint64_t j, double* out) const {
    const uint64_t* rj = bitsets_.row(j);
    const size_t words = bitsets_.words();
    parallel_for(bitsets_.items(), workers_, [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i)
            out[i] = static_cast<double>(intersection_count(bitsets_.row(i), rj, words)) / scale_;
    });
}

void SubMatrix::append_column(uint64_t parent_column, const CooccurrenceSource& parent) {
    if (rows_ == 0) rows_ = parent.dim();
    if (rows_ != parent.dim()) throw error("SubMatrix: parent dimension mismatch");
    values_.resize(values_.size() + rows_);
    parent.column(parent_column, values_.data() + column_ids_.size() * rows_);
    column_ids_.push_back(parent_column);
}

SubMatrix project(const CooccurrenceSource& parent, std::span<const KnownQueryPair> known,
                  const ObservationLog& log, ProjectionSide side) {
    SubMatrix out(parent.dim());
    std::unordered_map<Token, uint32_t, TokenHash> positions;
    if (side == ProjectionSide::trapdoor) positions = log.token_positions();

    std::vector<uint64_t> seen;
    for (const KnownQueryPair& kq : known) {
        uint64_t col;
        if (side == ProjectionSide::conjunction) {
            col = kq.attacker_rank;
        } else {
            auto it = positions.find(kq.token);
            if (it == positions.end())
                throw error("project: known query trapdoor is not in the observation log");
            col = it->second;
        }
        if (col >= parent.dim()) throw error("project: known query column out of range");
        if (std::find(seen.begin(), seen.end(), col) != seen.end())
            throw error("project: duplicate known-query column");
        seen.push_back(col);
        out.append_column(col, parent);
    }
    return out;
}

uint64_t estimate_bytes(uint32_t v, uint32_t d, double query_fraction, uint32_t float_width) {
    if (query_fraction < 0.0 || query_fraction > 1.0)
        throw error("estimate_bytes: query fraction must be in [0,1]");
    uint64_t m = binomial(v, d);  // throws on d > v
    long double q = query_fraction;
    long double bytes = 2.0L * (q + q * q) * static_cast<long double>(m) *
                        static_cast<long double>(m) * static_cast<long double>(float_width);
    if (bytes > static_cast<long double>(UINT64_MAX))
        throw error("estimate_bytes: result overflows a 64-bit byte count");
    return static_cast<uint64_t>(llroundl(bytes));
}

CostEstimate estimate_time_complexity(uint32_t v, uint32_t d, uint64_t l, uint64_t k,
                                      uint64_t ref_speed) {
    if (ref_speed == 0) throw error("estimate_time_complexity: ref_speed must be positive");
    uint64_t m = binomial(v, d);
    CostEstimate est;
    est.extension_cost = m * static_cast<uint64_t>(d - 1);
    long double g = (static_cast<long double>(l) / static_cast<long double>(ref_speed)) *
                    static_cast<long double>(l) * static_cast<long double>(m) *
                    static_cast<long double>(k);
    est.attack_cost = g > static_cast<long double>(UINT64_MAX)
                          ? UINT64_MAX
                          : static_cast<uint64_t>(llroundl(g));
    return est;
}

}  // namespace ckws
