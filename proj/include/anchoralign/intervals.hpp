#ifndef ANCHORALIGN_INTERVALS_HPP
#define ANCHORALIGN_INTERVALS_HPP

#include <cstddef>
#include <vector>

#include "anchoralign/anchoring.hpp"
#include "anchoralign/embedding_store.hpp"

namespace anchoralign {

struct IntervalParams {
    // low-density points further than this from the local diagonal are ignored
    double deviation_ignore_threshold = 10.0;
    double max_dist_to_the_diagonal = 20.0;
    double max_gap_size = 100.0;
    double min_horizontal_density = 0.15;
    bool detect = false;
    // implies detect
    bool adaptive = false;

    void validate() const;
};

// A source x target rectangle believed to be parallel. `src`/`tgt` are the
// bounds handed to the aligner; `core_src`/`core_tgt` span the first to the
// last anchor.
struct AlignableInterval {
    IndexRange src;
    IndexRange tgt;
    IndexRange core_src;
    IndexRange core_tgt;
    std::vector<AnchorPoint> anchors;

    double horizontal_density() const;
};

struct RatioEstimates {
    double sent_ratio = 1.0;
    double char_ratio = 1.0;
};

// |curr.y - (prev.y + (curr.x - prev.x) * sent_ratio)|
double deviation(const AnchorPoint& curr, const AnchorPoint& prev, double sent_ratio);

// Anchors dropped because they break an otherwise monotonic neighbourhood of
// up to two predecessors and two successors. Returned as a mask over `anchors`.
std::vector<bool> monotonicity_outliers(const std::vector<AnchorPoint>& anchors);

// Runs the interval automaton over `anchors` (sorted by x), filters the
// result, removes target-range overlaps and extends bounds to the midpoints
// between neighbouring intervals. Output is in source order.
// `min_density_ratio` is the anchoring threshold, reused by the automaton.
std::vector<AlignableInterval> extract_intervals(const std::vector<AnchorPoint>& anchors,
                                                 const IntervalParams& params, double sent_ratio,
                                                 double min_density_ratio, std::size_t n_src,
                                                 std::size_t n_tgt);

// One interval covering both documents with every anchor.
AlignableInterval whole_document_interval(const std::vector<AnchorPoint>& anchors, std::size_t n_src,
                                          std::size_t n_tgt);

// Ratios over the anchor-bounded cores of the intervals. Throws EmptyIntervals.
RatioEstimates estimate_ratios(const std::vector<AlignableInterval>& intervals, const SentenceDoc& src,
                               const SentenceDoc& tgt);

// Whole-document sentRatio and charRatio.
RatioEstimates document_ratios(const SentenceDoc& src, const SentenceDoc& tgt);

struct AdaptiveResult {
    std::vector<AnchorPoint> anchors;
    std::vector<AlignableInterval> intervals;
    RatioEstimates ratios;
    // pass 1 produced nothing; a single whole-document interval was used
    bool fell_back = false;
};

// Two passes of anchor extraction + interval detection; the second uses
// ratios re-estimated from the first pass's intervals. k-best lists do not
// depend on the ratios and are shared between passes.
AdaptiveResult adaptive_pass(const CandidateLists& rows, const CandidateLists& cols,
                             const SentenceDoc& src, const SentenceDoc& tgt, AnchorParams anchor_params,
                             const IntervalParams& params, RatioEstimates initial);

} // namespace anchoralign

#endif
