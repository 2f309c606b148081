#include "anchoralign/scoring.hpp"

#include <cstdio>

#include "anchoralign/error.hpp"

namespace anchoralign {

PRF strict_prf(const std::vector<BeadKey>& pred, const GoldAlignment& gold, bool include_null) {
    std::set<BeadKey> predicted;
    for (const auto& b : pred) {
        if (include_null || !b.is_null()) {
            predicted.insert(b);
        }
    }
    PRF prf;
    for (const auto& g : gold.beads) {
        if (!include_null && g.is_null()) {
            continue;
        }
        ++prf.n_gold;
        if (predicted.count(g)) {
            ++prf.n_correct;
        }
    }
    prf.n_pred = predicted.size();
    if (prf.n_pred > 0) {
        prf.precision = static_cast<double>(prf.n_correct) / static_cast<double>(prf.n_pred);
    }
    if (prf.n_gold > 0) {
        prf.recall = static_cast<double>(prf.n_correct) / static_cast<double>(prf.n_gold);
    }
    if (prf.precision + prf.recall > 0.0) {
        prf.f1 = 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall);
    }
    return prf;
}

GoldAlignment make_gold(const std::vector<BeadKey>& beads) {
    GoldAlignment gold;
    for (std::size_t i = 0; i < beads.size(); ++i) {
        if (!gold.beads.insert(beads[i]).second) {
            throw Error(ErrorCode::ParseError, "duplicate bead", i + 1);
        }
    }
    return gold;
}

GoldAlignment load_gold(const std::string& path, BeadFormat format) {
    return make_gold(load_beads(path, format));
}

std::string format_prf(const PRF& prf) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f\t%.1f\t%.1f", 100.0 * prf.precision, 100.0 * prf.recall,
                  100.0 * prf.f1);
    return buf;
}

} // namespace anchoralign
