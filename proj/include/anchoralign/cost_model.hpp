#ifndef ANCHORALIGN_COST_MODEL_HPP
#define ANCHORALIGN_COST_MODEL_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "anchoralign/embedding_store.hpp"

namespace anchoralign {

struct CostParams {
    double neighbour_coef = 0.6;  // c
    double size_penalty = 0.06;   // p
    double length_weight = 0.33;  // w
    // coefficient on the log2 term of the length distance
    double length_slope = 1.0;
    std::size_t max_group_size = 4;
    bool allow_2_2 = false;
    bool allow_empty = true;
    double empty_bead_cost = 1.0;
    double local_diag_beam = 20.0;
    double char_ratio = 1.0;

    void validate() const;
};

struct BeadShape {
    std::size_t src = 0;
    std::size_t tgt = 0;

    bool operator==(const BeadShape&) const = default;
};

bool is_legal_shape(BeadShape shape, const CostParams& params);

// Every legal shape in tie-break order: 1-1, 1-2, 2-1, ..., 1-n, n-1, 2-2,
// 1-0, 0-1.
std::vector<BeadShape> permitted_shapes(const CostParams& params);

double clamp_cosine(double cos);

// 1 - clamp(cos(a, b), 0, 1)
double d_embed(std::span<const double> a, std::span<const double> b);

// Mean of the four neighbour cosines, each clamped to [0, 1]; a missing
// neighbour contributes 0 and the denominator stays 4.
double neighbour_sim(const std::array<std::optional<double>, 4>& cosines);

double d_embed_prime(double d_embed_value, double neighbour_sim_value, double neighbour_coef);

double d_embed_double_prime(double d_embed_prime_value, std::size_t src_size, std::size_t tgt_size,
                            double size_penalty);

// 1 - slope * log2(1 + min/max) over the source length and the target length
// divided by char_ratio. Throws ZeroLength when either length is 0.
double d_length(std::size_t src_chars, std::size_t tgt_chars, double char_ratio,
                double length_slope = 1.0);

// Scores beads of one document pair. Group vectors are sums of normalized
// sentence vectors, served from per-side prefix sums.
class BeadScorer {
public:
    BeadScorer(const SentenceDoc& src_doc, const SentenceDoc& tgt_doc, const EmbeddingMatrix& src_emb,
               const EmbeddingMatrix& tgt_emb, CostParams params);

    const CostParams& params() const noexcept { return params_; }
    std::size_t src_size() const noexcept { return src_doc_->size(); }
    std::size_t tgt_size() const noexcept { return tgt_doc_->size(); }

    // Raw cosine between two groups (either may be a single sentence).
    double group_cosine(IndexRange src, IndexRange tgt) const;
    double neighbour_sim(IndexRange src, IndexRange tgt) const;
    double d_embed(IndexRange src, IndexRange tgt) const;
    double d_length(IndexRange src, IndexRange tgt) const;

    // Final per-bead cost d_final. Empty beads cost empty_bead_cost. Throws
    // IllegalShape for shapes the params forbid.
    double bead_cost(IndexRange src, IndexRange tgt) const;

private:
    struct Side {
        std::size_t dim = 0;
        // (rows + 1) x dim running sums
        std::vector<double> prefix;
    };

    static Side build_side(const EmbeddingMatrix& m);

    const SentenceDoc* src_doc_;
    const SentenceDoc* tgt_doc_;
    Side src_;
    Side tgt_;
    CostParams params_;
};

} // namespace anchoralign

#endif
