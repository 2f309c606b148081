#ifndef ANCHORALIGN_SCORING_HPP
#define ANCHORALIGN_SCORING_HPP

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "anchoralign/bead_io.hpp"

namespace anchoralign {

struct GoldAlignment {
    std::set<BeadKey> beads;
};

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t n_pred = 0;
    std::size_t n_gold = 0;
    std::size_t n_correct = 0;
};

// A predicted bead is correct only when both index sets equal a gold bead's.
// With include_null=false, beads with an empty side are removed from both
// sets first. Duplicate predictions count once.
PRF strict_prf(const std::vector<BeadKey>& pred, const GoldAlignment& gold, bool include_null = true);

// Rejects duplicate beads.
GoldAlignment make_gold(const std::vector<BeadKey>& beads);
GoldAlignment load_gold(const std::string& path, BeadFormat format);

// "P<TAB>R<TAB>F1" as percentages with one decimal.
std::string format_prf(const PRF& prf);

} // namespace anchoralign

#endif
