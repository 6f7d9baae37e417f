#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ckws/cooccurrence.hpp"
#include "ckws/scheme.hpp"

namespace ckws {

enum class Norm { l2, l1 };

struct AttackConfig {
    uint64_t ref_speed = 0;          // 0 = default: max(1, ceil(0.05 * l))
    Norm norm = Norm::l2;
    double epsilon_floor = 1e-20;    // clamp for -ln at exact sub-row matches
    size_t workers = 0;
};

uint64_t default_ref_speed(uint64_t l);

struct Prediction {
    Token token{};
    uint32_t log_pos = 0;
    uint64_t conjunction_rank = 0;   // attacker-side rank
    double score = 0.0;
    double certainty = 0.0;
    bool known = false;              // true for initial known queries
    uint32_t iteration = 0;          // refinement pass that fixed this trapdoor
};

// Score(td, ckw) = -ln(max(||ckw_row - td_row||, epsilon_floor)).
double score(std::span<const double> ckw_row, std::span<const double> td_row,
             const AttackConfig& config);

// Best minus second-best of a descending score list; +inf when only one
// candidate exists.
double certainty(std::span<const double> sorted_scores_desc);

// Single-pass attack: for every observed trapdoor not in KnownQ (the
// sub-matrix columns), the arg-max-score conjunction with its certainty.
// Ties go to the lower conjunction rank.
std::vector<Prediction> score_attack(const ConjunctionSet& attacker_set, const SubMatrix& cs_ckw,
                                     const ObservationLog& log, const SubMatrix& cs_td,
                                     const AttackConfig& config);

// The iterative attack: score all unknown trapdoors, promote the ref_speed
// most certain predictions to known queries, extend both sub-matrices with
// the corresponding parent columns, repeat until fewer than ref_speed
// unknowns remain. Output covers every observed trapdoor exactly once.
std::vector<Prediction> refined_score_attack(const ConjunctionSet& attacker_set,
                                             const CooccurrenceSource& c_ckw,
                                             const ObservationLog& log,
                                             const CooccurrenceSource& c_td,
                                             std::span<const KnownQueryPair> known,
                                             const AttackConfig& config);

// One record per trapdoor: token, rank, keywords, score, certainty,
// known/predicted flag, iteration.
void write_predictions(std::span<const Prediction> predictions, const ConjunctionSet& attacker_set,
                       const std::filesystem::path& path);

}  // namespace ckws
