#include "anchoralign/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "anchoralign/error.hpp"

namespace anchoralign {

void CostParams::validate() const {
    if (neighbour_coef < 0.0 || size_penalty < 0.0 || length_weight < 0.0 || length_weight > 1.0) {
        throw Error(ErrorCode::Config, "cost weights must satisfy c, p >= 0 and 0 <= w <= 1");
    }
    if (max_group_size < 1) {
        throw Error(ErrorCode::Config, "max-group-size must be at least 1");
    }
    if (!(local_diag_beam > 0.0)) {
        throw Error(ErrorCode::Config, "local-diag-beam must be positive");
    }
    if (!(char_ratio > 0.0)) {
        throw Error(ErrorCode::Config, "char-ratio must be positive");
    }
    if (empty_bead_cost < 0.0 || length_slope < 0.0) {
        throw Error(ErrorCode::Config, "empty-bead-cost and length-slope must be non-negative");
    }
}

bool is_legal_shape(BeadShape shape, const CostParams& params) {
    const std::size_t a = shape.src;
    const std::size_t b = shape.tgt;
    if (a == 0 && b == 0) {
        return false;
    }
    if (a == 0 || b == 0) {
        return params.allow_empty && a + b == 1;
    }
    if (a == 2 && b == 2) {
        return params.allow_2_2;
    }
    if (a == 1 || b == 1) {
        return std::max(a, b) <= params.max_group_size;
    }
    return false;
}

std::vector<BeadShape> permitted_shapes(const CostParams& params) {
    std::vector<BeadShape> shapes{{1, 1}};
    for (std::size_t n = 2; n <= params.max_group_size; ++n) {
        shapes.push_back({1, n});
        shapes.push_back({n, 1});
    }
    if (params.allow_2_2) {
        shapes.push_back({2, 2});
    }
    if (params.allow_empty) {
        shapes.push_back({1, 0});
        shapes.push_back({0, 1});
    }
    return shapes;
}

double clamp_cosine(double cos) {
    return std::clamp(cos, 0.0, 1.0);
}

double d_embed(std::span<const double> a, std::span<const double> b) {
    double ab = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
        ab += a[k] * b[k];
        aa += a[k] * a[k];
        bb += b[k] * b[k];
    }
    const double cos = (aa > 0.0 && bb > 0.0) ? ab / std::sqrt(aa * bb) : 0.0;
    return 1.0 - clamp_cosine(cos);
}

double neighbour_sim(const std::array<std::optional<double>, 4>& cosines) {
    double sum = 0.0;
    for (const auto& c : cosines) {
        if (c) {
            sum += clamp_cosine(*c);
        }
    }
    return sum / 4.0;
}

double d_embed_prime(double d_embed_value, double neighbour_sim_value, double neighbour_coef) {
    return d_embed_value + neighbour_coef * neighbour_sim_value;
}

double d_embed_double_prime(double d_embed_prime_value, std::size_t src_size, std::size_t tgt_size,
                            double size_penalty) {
    return d_embed_prime_value + size_penalty * static_cast<double>(src_size + tgt_size);
}

double d_length(std::size_t src_chars, std::size_t tgt_chars, double char_ratio, double length_slope) {
    if (src_chars == 0 || tgt_chars == 0) {
        throw Error(ErrorCode::ZeroLength, "length distance needs non-empty text on both sides");
    }
    const double src_len = static_cast<double>(src_chars);
    const double tgt_len = static_cast<double>(tgt_chars) / char_ratio;
    const double ratio = std::min(src_len, tgt_len) / std::max(src_len, tgt_len);
    return 1.0 - length_slope * std::log2(1.0 + ratio);
}

BeadScorer::Side BeadScorer::build_side(const EmbeddingMatrix& m) {
    Side side;
    side.dim = m.dim();
    side.prefix.assign((m.rows() + 1) * side.dim, 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto row = m.row(i);
        const double* before = side.prefix.data() + i * side.dim;
        double* after = side.prefix.data() + (i + 1) * side.dim;
        for (std::size_t k = 0; k < side.dim; ++k) {
            after[k] = before[k] + row[k];
        }
    }
    return side;
}

BeadScorer::BeadScorer(const SentenceDoc& src_doc, const SentenceDoc& tgt_doc,
                       const EmbeddingMatrix& src_emb, const EmbeddingMatrix& tgt_emb,
                       CostParams params)
    : src_doc_(&src_doc), tgt_doc_(&tgt_doc), params_(params) {
    params_.validate();
    if (src_emb.rows() != src_doc.size() || tgt_emb.rows() != tgt_doc.size()) {
        throw Error(ErrorCode::SizeMismatch, "embedding rows do not match sentence counts");
    }
    if (src_emb.dim() != tgt_emb.dim()) {
        throw Error(ErrorCode::DimMismatch, "source and target embeddings differ in dimension");
    }
    const EmbeddingMatrix src_norm = l2_normalize(src_emb);
    const EmbeddingMatrix tgt_norm = l2_normalize(tgt_emb);
    src_ = build_side(src_norm);
    tgt_ = build_side(tgt_norm);
}

double BeadScorer::group_cosine(IndexRange src, IndexRange tgt) const {
    if (src.empty() || tgt.empty() || src.end > src_size() || tgt.end > tgt_size()) {
        throw Error(ErrorCode::OutOfRange, "group cosine needs two non-empty in-range groups");
    }
    const std::size_t dim = src_.dim;
    const double* s_hi = src_.prefix.data() + src.end * dim;
    const double* s_lo = src_.prefix.data() + src.begin * dim;
    const double* t_hi = tgt_.prefix.data() + tgt.end * dim;
    const double* t_lo = tgt_.prefix.data() + tgt.begin * dim;
    double uv = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        const double u = s_hi[k] - s_lo[k];
        const double v = t_hi[k] - t_lo[k];
        uv += u * v;
        uu += u * u;
        vv += v * v;
    }
    if (uu <= 0.0 || vv <= 0.0) {
        return 0.0;
    }
    return uv / std::sqrt(uu * vv);
}

double BeadScorer::neighbour_sim(IndexRange src, IndexRange tgt) const {
    std::array<std::optional<double>, 4> cos;
    if (src.begin > 0) {
        cos[0] = group_cosine({src.begin - 1, src.begin}, tgt);
    }
    if (src.end < src_size()) {
        cos[1] = group_cosine({src.end, src.end + 1}, tgt);
    }
    if (tgt.begin > 0) {
        cos[2] = group_cosine(src, {tgt.begin - 1, tgt.begin});
    }
    if (tgt.end < tgt_size()) {
        cos[3] = group_cosine(src, {tgt.end, tgt.end + 1});
    }
    return anchoralign::neighbour_sim(cos);
}

double BeadScorer::d_embed(IndexRange src, IndexRange tgt) const {
    return 1.0 - clamp_cosine(group_cosine(src, tgt));
}

double BeadScorer::d_length(IndexRange src, IndexRange tgt) const {
    return anchoralign::d_length(src_doc_->chars_in(src), tgt_doc_->chars_in(tgt), params_.char_ratio,
                                 params_.length_slope);
}

double BeadScorer::bead_cost(IndexRange src, IndexRange tgt) const {
    if (!is_legal_shape({src.size(), tgt.size()}, params_)) {
        throw Error(ErrorCode::IllegalShape, std::to_string(src.size()) + "-" +
                                                 std::to_string(tgt.size()) + " beads are not permitted");
    }
    if (src.empty() || tgt.empty()) {
        return params_.empty_bead_cost;
    }
    const double de = d_embed(src, tgt);
    const double dp = d_embed_prime(de, neighbour_sim(src, tgt), params_.neighbour_coef);
    const double dpp = d_embed_double_prime(dp, src.size(), tgt.size(), params_.size_penalty);
    const double d = (1.0 - params_.length_weight) * dpp + params_.length_weight * d_length(src, tgt);
    return d * static_cast<double>(src.size() + tgt.size());
}

} // namespace anchoralign
