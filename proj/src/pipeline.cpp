#include "anchoralign/pipeline.hpp"

#include <chrono>

#include "anchoralign/error.hpp"
#include "anchoralign/parallel.hpp"

namespace anchoralign {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}

    double lap_ms() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace

std::vector<Bead> DocumentAlignment::beads() const {
    std::vector<Bead> out;
    for (const auto& ai : intervals) {
        out.insert(out.end(), ai.path.beads.begin(), ai.path.beads.end());
    }
    return out;
}

DocumentAlignment align_documents(const SentenceDoc& src_doc, const SentenceDoc& tgt_doc,
                                  const EmbeddingMatrix& src_emb, const EmbeddingMatrix& tgt_emb,
                                  const AlignConfig& config) {
    config.validate();
    if (src_emb.rows() != src_doc.size()) {
        throw Error(ErrorCode::SizeMismatch, "source has " + std::to_string(src_doc.size()) +
                                                 " sentences but " + std::to_string(src_emb.rows()) +
                                                 " embedding rows");
    }
    if (tgt_emb.rows() != tgt_doc.size()) {
        throw Error(ErrorCode::SizeMismatch, "target has " + std::to_string(tgt_doc.size()) +
                                                 " sentences but " + std::to_string(tgt_emb.rows()) +
                                                 " embedding rows");
    }
    if (src_emb.dim() != tgt_emb.dim()) {
        throw Error(ErrorCode::DimMismatch, "source and target embeddings differ in dimension");
    }

    DocumentAlignment result;
    const std::size_t n_src = src_doc.size();
    const std::size_t n_tgt = tgt_doc.size();
    if (n_src == 0 || n_tgt == 0) {
        return result;
    }

    Stopwatch clock;
    const EmbeddingMatrix src = l2_normalize(src_emb);
    const EmbeddingMatrix tgt = l2_normalize(tgt_emb);
    result.timings.load_ms = clock.lap_ms();

    RatioEstimates ratios = document_ratios(src_doc, tgt_doc);
    if (config.sent_ratio) {
        ratios.sent_ratio = *config.sent_ratio;
    }
    if (config.char_ratio) {
        ratios.char_ratio = *config.char_ratio;
    }

    const SimilarityMatrix sim = similarity_matrix(src, tgt, config.threads);
    result.timings.similarity_ms = clock.lap_ms();
    AnchorParams anchor_params = config.anchor;
    anchor_params.sent_ratio = ratios.sent_ratio;
    const CandidateLists rows = k_best_rows(sim, anchor_params);
    const CandidateLists cols = k_best_cols(sim, anchor_params);
    result.timings.kbest_ms = clock.lap_ms();

    std::vector<AlignableInterval> intervals;
    if (config.intervals.adaptive) {
        AdaptiveResult adaptive =
            adaptive_pass(rows, cols, src_doc, tgt_doc, anchor_params, config.intervals, ratios);
        // anchoring and interval detection are interleaved in the two passes
        result.timings.intervals_ms = clock.lap_ms();
        result.anchors = std::move(adaptive.anchors);
        intervals = std::move(adaptive.intervals);
        result.fell_back = adaptive.fell_back;
        ratios.sent_ratio = adaptive.ratios.sent_ratio;
        if (!config.char_ratio) {
            ratios.char_ratio = adaptive.ratios.char_ratio;
        }
    } else {
        result.anchors = extract_anchors(rows, cols, anchor_params, n_src, n_tgt);
        result.timings.anchoring_ms = clock.lap_ms();
        if (config.intervals.detect) {
            intervals = extract_intervals(result.anchors, config.intervals, ratios.sent_ratio,
                                          anchor_params.min_density_ratio, n_src, n_tgt);
        }
        if (intervals.empty()) {
            result.fell_back = config.intervals.detect;
            intervals.push_back(whole_document_interval(result.anchors, n_src, n_tgt));
        }
        result.timings.intervals_ms = clock.lap_ms();
    }
    result.ratios = ratios;

    CostParams cost = config.cost;
    cost.char_ratio = ratios.char_ratio;
    const BeadScorer scorer(src_doc, tgt_doc, src, tgt, cost);
    result.intervals.resize(intervals.size());
    parallel_for(intervals.size(), config.threads, [&](std::size_t i) {
        result.intervals[i].path = align_interval(intervals[i], scorer, ratios.sent_ratio);
        result.intervals[i].interval = std::move(intervals[i]);
    });

    double total = 0.0;
    std::size_t sentences = 0;
    for (const auto& ai : result.intervals) {
        total += ai.path.total_cost;
        sentences += ai.interval.src.size() + ai.interval.tgt.size();
    }
    result.avg_score = sentences ? total / static_cast<double>(sentences) : 0.0;
    result.timings.dp_ms = clock.lap_ms();
    return result;
}

} // namespace anchoralign
