#ifndef ANCHORALIGN_PIPELINE_HPP
#define ANCHORALIGN_PIPELINE_HPP

#include <vector>

#include "anchoralign/anchoring.hpp"
#include "anchoralign/config.hpp"
#include "anchoralign/dp_aligner.hpp"
#include "anchoralign/embedding_store.hpp"
#include "anchoralign/intervals.hpp"

namespace anchoralign {

// Wall-clock milliseconds per stage. The similarity matrix and the k-best
// search are the quadratic part; everything else should scale with the
// number of anchors.
struct StageTimings {
    double load_ms = 0.0;
    double similarity_ms = 0.0;
    double kbest_ms = 0.0;
    double anchoring_ms = 0.0;
    double intervals_ms = 0.0;
    double dp_ms = 0.0;

    double quadratic_ms() const { return similarity_ms + kbest_ms; }
    double subquadratic_ms() const { return anchoring_ms + intervals_ms + dp_ms; }
};

struct AlignedInterval {
    AlignableInterval interval;
    AlignmentPath path;
};

struct DocumentAlignment {
    // final anchor set (second pass in adaptive mode)
    std::vector<AnchorPoint> anchors;
    std::vector<AlignedInterval> intervals;
    RatioEstimates ratios;
    // interval costs over sentences inside intervals, both sides
    double avg_score = 0.0;
    bool fell_back = false;
    StageTimings timings;

    // All beads in source order.
    std::vector<Bead> beads() const;
};

// Full pipeline: anchoring, optional interval detection (adaptive or not),
// then anchor-guided DP inside each interval. Sentences outside every
// interval get no bead. An empty document on either side yields an empty
// alignment.
DocumentAlignment align_documents(const SentenceDoc& src_doc, const SentenceDoc& tgt_doc,
                                  const EmbeddingMatrix& src_emb, const EmbeddingMatrix& tgt_emb,
                                  const AlignConfig& config);

} // namespace anchoralign

#endif
