#include "anchoralign/anchoring.hpp"

#include <algorithm>
#include <cmath>

#include "anchoralign/error.hpp"
#include "anchoralign/parallel.hpp"

namespace anchoralign {

namespace {

constexpr double kZoneEps = 1e-9;

bool better(const Candidate& a, const Candidate& b) {
    return a.sim > b.sim || (a.sim == b.sim && a.index < b.index);
}

// Keeps `list` as the best-first top-k. Candidates must arrive in ascending
// index order so equal similarities resolve towards the smaller index.
void offer(std::vector<Candidate>& list, std::size_t k, Candidate c) {
    if (list.size() == k) {
        if (!better(c, list.back())) {
            return;
        }
        list.pop_back();
    }
    auto pos = std::upper_bound(list.begin(), list.end(), c,
                                [](const Candidate& a, const Candidate& b) { return better(a, b); });
    list.insert(pos, c);
}

void apply_filters(std::vector<Candidate>& list, const AnchorParams& params) {
    if (params.k >= 2 && list.size() >= 2 && list[0].sim - list[1].sim < params.margin_threshold) {
        list.clear();
        return;
    }
    std::erase_if(list, [&](const Candidate& c) { return c.sim <= params.cos_threshold; });
}

double zone_centre(std::size_t u, std::size_t x, std::size_t y, double sent_ratio) {
    return static_cast<double>(y) + (static_cast<double>(u) - static_cast<double>(x)) * sent_ratio;
}

struct ColumnSpan {
    std::size_t lo = 0;
    std::size_t hi = 0; // inclusive
    bool empty = true;
};

ColumnSpan zone_columns(std::size_t x, double half_x, std::size_t n_src) {
    ColumnSpan span;
    if (n_src == 0) {
        return span;
    }
    const double lo = std::ceil(static_cast<double>(x) - half_x - kZoneEps);
    const double hi = std::floor(static_cast<double>(x) + half_x + kZoneEps);
    span.lo = static_cast<std::size_t>(std::max(0.0, lo));
    span.hi = static_cast<std::size_t>(std::min(static_cast<double>(n_src - 1), hi));
    span.empty = span.lo > span.hi;
    return span;
}

} // namespace

void AnchorParams::validate() const {
    if (k < 1) {
        throw Error(ErrorCode::Config, "k must be at least 1");
    }
    if (delta_x < 1.0 || delta_y < 1.0) {
        throw Error(ErrorCode::Config, "delta-x and delta-y must be at least 1");
    }
    if (margin_threshold < 0.0 || cos_threshold < 0.0 || min_density_ratio < 0.0) {
        throw Error(ErrorCode::Config, "anchor thresholds must be non-negative");
    }
    if (!(sent_ratio > 0.0)) {
        throw Error(ErrorCode::Config, "sent-ratio must be positive");
    }
}

SimilarityMatrix similarity_matrix(const EmbeddingMatrix& src, const EmbeddingMatrix& tgt,
                                   unsigned threads) {
    if (src.dim() != tgt.dim()) {
        throw Error(ErrorCode::DimMismatch, "source dim " + std::to_string(src.dim()) +
                                                " != target dim " + std::to_string(tgt.dim()));
    }
    SimilarityMatrix sim;
    sim.n_src = src.rows();
    sim.n_tgt = tgt.rows();
    sim.values.assign(sim.n_src * sim.n_tgt, 0.0);
    const std::size_t dim = src.dim();
    const float* tdata = tgt.data().data();
    parallel_for(sim.n_src, threads, [&](std::size_t i) {
        const float* a = src.data().data() + i * dim;
        double* out = sim.values.data() + i * sim.n_tgt;
        for (std::size_t j = 0; j < sim.n_tgt; ++j) {
            const float* b = tdata + j * dim;
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                dot += static_cast<double>(a[k]) * b[k];
            }
            out[j] = dot;
        }
    });
    return sim;
}

SimilarityMatrix transpose(const SimilarityMatrix& sim) {
    SimilarityMatrix t;
    t.n_src = sim.n_tgt;
    t.n_tgt = sim.n_src;
    t.values.resize(sim.values.size());
    for (std::size_t i = 0; i < sim.n_src; ++i) {
        for (std::size_t j = 0; j < sim.n_tgt; ++j) {
            t.values[j * t.n_tgt + i] = sim.at(i, j);
        }
    }
    return t;
}

CandidateLists k_best_rows(const SimilarityMatrix& sim, const AnchorParams& params) {
    CandidateLists lists(sim.n_src);
    for (std::size_t i = 0; i < sim.n_src; ++i) {
        auto& list = lists[i];
        list.reserve(params.k);
        for (std::size_t j = 0; j < sim.n_tgt; ++j) {
            offer(list, params.k, {j, sim.at(i, j)});
        }
        apply_filters(list, params);
    }
    return lists;
}

CandidateLists k_best_cols(const SimilarityMatrix& sim, const AnchorParams& params) {
    // Row-major sweep; each column sees its sources in ascending order.
    CandidateLists lists(sim.n_tgt);
    for (auto& list : lists) {
        list.reserve(params.k);
    }
    for (std::size_t i = 0; i < sim.n_src; ++i) {
        for (std::size_t j = 0; j < sim.n_tgt; ++j) {
            offer(lists[j], params.k, {i, sim.at(i, j)});
        }
    }
    for (auto& list : lists) {
        apply_filters(list, params);
    }
    return lists;
}

std::vector<CandidatePoint> mutual_candidates(const CandidateLists& rows, const CandidateLists& cols) {
    std::vector<CandidatePoint> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& c : rows[i]) {
            if (c.index >= cols.size()) {
                continue;
            }
            const auto& back = cols[c.index];
            const bool mutual = std::any_of(back.begin(), back.end(),
                                            [&](const Candidate& b) { return b.index == i; });
            if (mutual) {
                out.push_back({i, c.index, c.sim});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const CandidatePoint& a, const CandidatePoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    return out;
}

std::size_t zone_cell_count(std::size_t x, std::size_t y, const AnchorParams& params,
                            std::size_t n_src, std::size_t n_tgt) {
    const ColumnSpan cols = zone_columns(x, params.delta_x / 2.0, n_src);
    if (cols.empty || n_tgt == 0) {
        return 0;
    }
    const double half_y = params.delta_y / 2.0;
    std::size_t cells = 0;
    for (std::size_t u = cols.lo; u <= cols.hi; ++u) {
        const double c = zone_centre(u, x, y, params.sent_ratio);
        const double lo = std::max(0.0, std::ceil(c - half_y - kZoneEps));
        const double hi = std::min(static_cast<double>(n_tgt - 1), std::floor(c + half_y + kZoneEps));
        if (hi >= lo) {
            cells += static_cast<std::size_t>(hi - lo) + 1;
        }
    }
    return cells;
}

double local_density_ratio(const CandidatePoint& p, const std::vector<CandidatePoint>& all,
                           const AnchorParams& params, std::size_t n_src, std::size_t n_tgt) {
    if (all.empty() || n_src == 0 || n_tgt == 0) {
        return 0.0;
    }
    const ColumnSpan cols = zone_columns(p.x, params.delta_x / 2.0, n_src);
    const double half_y = params.delta_y / 2.0;
    auto first = std::lower_bound(all.begin(), all.end(), cols.lo,
                                  [](const CandidatePoint& c, std::size_t x) { return c.x < x; });
    std::size_t inside = 0;
    for (auto it = first; it != all.end() && it->x <= cols.hi; ++it) {
        const double c = zone_centre(it->x, p.x, p.y, params.sent_ratio);
        if (std::abs(static_cast<double>(it->y) - c) <= half_y + kZoneEps) {
            ++inside;
        }
    }
    const std::size_t cells = zone_cell_count(p.x, p.y, params, n_src, n_tgt);
    if (cells == 0) {
        return 0.0;
    }
    const double zone_density = static_cast<double>(inside) / static_cast<double>(cells);
    const double avg_density =
        static_cast<double>(all.size()) / (static_cast<double>(n_src) * static_cast<double>(n_tgt));
    return zone_density / avg_density;
}

std::vector<AnchorPoint> density_filter(const std::vector<CandidatePoint>& cands,
                                        const AnchorParams& params, std::size_t n_src,
                                        std::size_t n_tgt) {
    std::vector<CandidatePoint> sorted = cands;
    std::sort(sorted.begin(), sorted.end(), [](const CandidatePoint& a, const CandidatePoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::vector<AnchorPoint> kept;
    for (const auto& c : sorted) {
        const double ratio = local_density_ratio(c, sorted, params, n_src, n_tgt);
        if (ratio >= params.min_density_ratio) {
            kept.push_back({c.x, c.y, c.sim, ratio});
        }
    }
    return kept;
}

std::vector<AnchorPoint> resolve_conflicts(std::vector<AnchorPoint> anchors) {
    std::sort(anchors.begin(), anchors.end(), [](const AnchorPoint& a, const AnchorPoint& b) {
        if (a.density_ratio != b.density_ratio) {
            return a.density_ratio > b.density_ratio;
        }
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    std::size_t max_x = 0;
    std::size_t max_y = 0;
    for (const auto& a : anchors) {
        max_x = std::max(max_x, a.x);
        max_y = std::max(max_y, a.y);
    }
    std::vector<char> row_taken(max_x + 1, 0);
    std::vector<char> col_taken(max_y + 1, 0);
    std::vector<AnchorPoint> accepted;
    for (const auto& a : anchors) {
        if (row_taken[a.x] || col_taken[a.y]) {
            continue;
        }
        row_taken[a.x] = 1;
        col_taken[a.y] = 1;
        accepted.push_back(a);
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const AnchorPoint& a, const AnchorPoint& b) { return a.x < b.x; });
    return accepted;
}

std::vector<AnchorPoint> extract_anchors(const CandidateLists& rows, const CandidateLists& cols,
                                         const AnchorParams& params, std::size_t n_src,
                                         std::size_t n_tgt) {
    params.validate();
    const auto cands = mutual_candidates(rows, cols);
    return resolve_conflicts(density_filter(cands, params, n_src, n_tgt));
}

std::vector<AnchorPoint> extract_anchors(const SimilarityMatrix& sim, const AnchorParams& params) {
    return extract_anchors(k_best_rows(sim, params), k_best_cols(sim, params), params, sim.n_src,
                           sim.n_tgt);
}

} // namespace anchoralign
