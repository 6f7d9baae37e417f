#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ckws/conjunction.hpp"
#include "ckws/corpus.hpp"
#include "ckws/scheme.hpp"

namespace ckws {

struct MemoryBudget {
    uint64_t bytes = 8ULL << 30;

    static MemoryBudget gib(double g) {
        return MemoryBudget{static_cast<uint64_t>(g * (1ULL << 30))};
    }
};

// Anything that can serve columns of a symmetric co-occurrence matrix. The
// attack consumes columns through this interface, so a materialized matrix
// and an on-demand computation are interchangeable.
class CooccurrenceSource {
  public:
    virtual ~CooccurrenceSource() = default;
    virtual uint64_t dim() const = 0;
    virtual double scale_n() const = 0;
    virtual void column(uint64_t j, double* out) const = 0;
};

// Dense symmetric matrix of scaled co-occurrence counts, row-major.
class CooccurrenceMatrix : public CooccurrenceSource {
  public:
    CooccurrenceMatrix() = default;
    CooccurrenceMatrix(uint64_t dim, double scale_n);

    uint64_t dim() const override { return dim_; }
    double scale_n() const override { return scale_; }
    void column(uint64_t j, double* out) const override;

    double at(uint64_t i, uint64_t j) const { return values_[i * dim_ + j]; }
    double& at(uint64_t i, uint64_t j) { return values_[i * dim_ + j]; }
    const std::vector<double>& values() const { return values_; }

    void save(const std::filesystem::path& path) const;
    static CooccurrenceMatrix load(const std::filesystem::path& path);

  private:
    uint64_t dim_ = 0;
    double scale_ = 1.0;
    std::vector<double> values_;
};

// Document bitsets for every conjunction rank (AND of the d keyword columns).
class ConjunctionPostings {
  public:
    ConjunctionPostings(const Corpus& corpus, const ConjunctionSet& set);

    uint64_t items() const { return items_; }
    size_t words() const { return words_; }
    uint32_t n_docs() const { return n_docs_; }
    const uint64_t* row(uint64_t rank) const { return bits_.data() + rank * words_; }
    uint64_t bytes() const { return bits_.size() * sizeof(uint64_t); }

  private:
    uint64_t items_ = 0;
    size_t words_ = 0;
    uint32_t n_docs_ = 0;
    std::vector<uint64_t> bits_;
};

// Result-set bitsets over DocumentIDs (the union of all observed result
// sets), one row per observed trapdoor.
class ResultBitsets {
  public:
    explicit ResultBitsets(const ObservationLog& log);

    uint64_t items() const { return items_; }
    size_t words() const { return words_; }
    size_t union_size() const { return union_size_; }
    const uint64_t* row(uint64_t i) const { return bits_.data() + i * words_; }
    uint64_t bytes() const { return bits_.size() * sizeof(uint64_t); }

  private:
    uint64_t items_ = 0;
    size_t words_ = 0;
    size_t union_size_ = 0;
    std::vector<uint64_t> bits_;
};

// m x m conjunction co-occurrence: entry (i,j) = |{docs containing all
// keywords of ckw_i and ckw_j}| / n. Tiled pairwise popcounts; counts are
// integers before the single final scaling, so tiling is bit-transparent.
CooccurrenceMatrix build_conjunction_cooccurrence(const Corpus& attacker_corpus,
                                                  const ConjunctionSet& set, MemoryBudget budget,
                                                  size_t workers = 0);

// l x l trapdoor co-occurrence: entry (i,j) = |R_i intersect R_j| / n_real.
CooccurrenceMatrix build_trapdoor_cooccurrence(const ObservationLog& log, uint32_t n_real,
                                               MemoryBudget budget, size_t workers = 0);

// Column-on-demand variants for runs whose dense parent would not fit the
// budget. Same values as the dense builders, computed per column.
class LazyConjunctionCooccurrence : public CooccurrenceSource {
  public:
    LazyConjunctionCooccurrence(const Corpus& attacker_corpus, const ConjunctionSet& set,
                                size_t workers = 0);
    uint64_t dim() const override { return postings_.items(); }
    double scale_n() const override { return scale_; }
    void column(uint64_t j, double* out) const override;
    uint64_t bytes() const { return postings_.bytes(); }

  private:
    ConjunctionPostings postings_;
    double scale_;
    size_t workers_;
};

class LazyTrapdoorCooccurrence : public CooccurrenceSource {
  public:
    LazyTrapdoorCooccurrence(const ObservationLog& log, uint32_t n_real, size_t workers = 0);
    uint64_t dim() const override { return bitsets_.items(); }
    double scale_n() const override { return scale_; }
    void column(uint64_t j, double* out) const override;
    uint64_t bytes() const { return bitsets_.bytes(); }

  private:
    ResultBitsets bitsets_;
    double scale_;
    size_t workers_;
};

// Sub-matrix of KnownQ columns, in KnownQ order, column-major.
class SubMatrix {
  public:
    SubMatrix() = default;
    SubMatrix(uint64_t rows) : rows_(rows) {}

    uint64_t rows() const { return rows_; }
    size_t cols() const { return column_ids_.size(); }
    const std::vector<uint64_t>& column_ids() const { return column_ids_; }
    const double* col(size_t c) const { return values_.data() + c * rows_; }
    double at(uint64_t row, size_t c) const { return values_[c * rows_ + row]; }

    void append_column(uint64_t parent_column, const CooccurrenceSource& parent);

  private:
    uint64_t rows_ = 0;
    std::vector<uint64_t> column_ids_;
    std::vector<double> values_;
};

enum class ProjectionSide { conjunction, trapdoor };

// Keeps only the KnownQ columns of the parent, in KnownQ order. The trapdoor
// side resolves tokens to log positions through the observation log.
SubMatrix project(const CooccurrenceSource& parent, std::span<const KnownQueryPair> known,
                  const ObservationLog& log, ProjectionSide side);

// Paper-model estimate of the bytes one experiment needs:
// 2*(q + q^2) * C(v,d)^2 * float_width.
uint64_t estimate_bytes(uint32_t v, uint32_t d, double query_fraction, uint32_t float_width);

struct CostEstimate {
    uint64_t extension_cost = 0;  // f(v) = C(v,d) * (d-1)
    uint64_t attack_cost = 0;     // g(v) = (l/RefSpeed) * l * C(v,d) * k
};

CostEstimate estimate_time_complexity(uint32_t v, uint32_t d, uint64_t l, uint64_t k,
                                      uint64_t ref_speed);

}  // namespace ckws
