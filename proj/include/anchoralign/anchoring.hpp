#ifndef ANCHORALIGN_ANCHORING_HPP
#define ANCHORALIGN_ANCHORING_HPP

#include <cstddef>
#include <vector>

#include "anchoralign/embedding_store.hpp"

namespace anchoralign {

// Cosine of every (source, target) sentence pair, row-major by source.
struct SimilarityMatrix {
    std::size_t n_src = 0;
    std::size_t n_tgt = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * n_tgt + j]; }
};

struct AnchorParams {
    std::size_t k = 3;
    double margin_threshold = 0.05;
    double cos_threshold = 0.4;
    double delta_x = 20.0;
    double delta_y = 3.0;
    double min_density_ratio = 0.3;
    // target sentences per source sentence; slope of the local diagonal
    double sent_ratio = 1.0;

    void validate() const;
};

struct Candidate {
    std::size_t index = 0;
    double sim = 0.0;
};

// Per-row (or per-column) surviving k-best candidates, best first.
using CandidateLists = std::vector<std::vector<Candidate>>;

struct CandidatePoint {
    std::size_t x = 0;
    std::size_t y = 0;
    double sim = 0.0;

    bool operator==(const CandidatePoint&) const = default;
};

struct AnchorPoint {
    std::size_t x = 0;
    std::size_t y = 0;
    double sim = 0.0;
    double density_ratio = 0.0;

    bool operator==(const AnchorPoint&) const = default;
};

// Both inputs must be L2-normalized with equal dimension. `threads` caps the
// number of workers; the result does not depend on it.
SimilarityMatrix similarity_matrix(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                                   unsigned threads = 1);

SimilarityMatrix transpose(const SimilarityMatrix& sim);

// Top-k targets per source row (ties by ascending index), then the margin
// criterion (skipped when fewer than two candidates exist), then the cosine
// threshold.
CandidateLists k_best_rows(const SimilarityMatrix& sim, const AnchorParams& params);
CandidateLists k_best_cols(const SimilarityMatrix& sim, const AnchorParams& params);

// Points (i, j) with j in rows[i] and i in cols[j], sorted by (x, y).
std::vector<CandidatePoint> mutual_candidates(const CandidateLists& rows, const CandidateLists& cols);

// Number of matrix cells inside the diagonal-parallel zone centred on (x, y),
// clipped to the matrix.
std::size_t zone_cell_count(std::size_t x, std::size_t y, const AnchorParams& params,
                            std::size_t n_src, std::size_t n_tgt);

// Zone density of `p` over the global candidate density. `all` must be
// sorted by (x, y) and contain `p`.
double local_density_ratio(const CandidatePoint& p, const std::vector<CandidatePoint>& all,
                           const AnchorParams& params, std::size_t n_src, std::size_t n_tgt);

// Keeps candidates whose ratio (against the original cloud) reaches
// min_density_ratio.
std::vector<AnchorPoint> density_filter(const std::vector<CandidatePoint>& cands,
                                        const AnchorParams& params, std::size_t n_src,
                                        std::size_t n_tgt);

// Greedy by descending density ratio, ties by ascending (x, y); output sorted by x.
std::vector<AnchorPoint> resolve_conflicts(std::vector<AnchorPoint> anchors);

// mutual k-best -> density filter -> conflict resolution
std::vector<AnchorPoint> extract_anchors(const SimilarityMatrix& sim, const AnchorParams& params);
std::vector<AnchorPoint> extract_anchors(const CandidateLists& rows, const CandidateLists& cols,
                                         const AnchorParams& params, std::size_t n_src,
                                         std::size_t n_tgt);

} // namespace anchoralign

#endif
