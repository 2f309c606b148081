#ifndef ANCHORALIGN_DP_ALIGNER_HPP
#define ANCHORALIGN_DP_ALIGNER_HPP

#include <cstddef>
#include <vector>

#include "anchoralign/anchoring.hpp"
#include "anchoralign/cost_model.hpp"
#include "anchoralign/intervals.hpp"

namespace anchoralign {

struct Bead {
    IndexRange src;
    IndexRange tgt;
    double cost = 0.0;
};

struct AlignmentPath {
    std::vector<Bead> beads;
    double total_cost = 0.0;
    // total_cost / (source + target sentences covered)
    double avg_score = 0.0;
};

// Minimal-cost tiling of the rectangle src x tgt with permitted beads.
// Equal costs prefer fewer beads, then the earlier shape in
// permitted_shapes() order for the last bead. Throws NoPath when no tiling
// exists.
AlignmentPath dp_segment(IndexRange src, IndexRange tgt, const BeadScorer& scorer);

// Anchors of `interval` that the path is forced through: each must move
// forward on both axes and stay within local_diag_beam of the diagonal
// through the previously retained one. The first retained anchor is the
// first that agrees with its successor (or the only anchor).
std::vector<AnchorPoint> select_waypoints(const AlignableInterval& interval, double sent_ratio,
                                          double local_diag_beam);

// Concatenates dp_segment over the rectangles between consecutive waypoints.
AlignmentPath align_interval(const AlignableInterval& interval, const BeadScorer& scorer,
                             double sent_ratio);

} // namespace anchoralign

#endif
