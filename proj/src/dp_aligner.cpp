#include "anchoralign/dp_aligner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anchoralign/error.hpp"

namespace anchoralign {

namespace {

struct Cell {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t beads = 0;
    // index into the shape list, or npos for unreachable / origin
    std::size_t shape = std::numeric_limits<std::size_t>::max();
};

bool same_cost(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

// true when (cost, beads, shape) is strictly preferable to `best`
bool improves(double cost, std::size_t beads, std::size_t shape, const Cell& best) {
    if (!std::isfinite(best.cost)) {
        return true;
    }
    if (!same_cost(cost, best.cost)) {
        return cost < best.cost;
    }
    if (beads != best.beads) {
        return beads < best.beads;
    }
    return shape < best.shape;
}

} // namespace

AlignmentPath dp_segment(IndexRange src, IndexRange tgt, const BeadScorer& scorer) {
    if (src.begin > src.end || tgt.begin > tgt.end || src.end > scorer.src_size() ||
        tgt.end > scorer.tgt_size()) {
        throw Error(ErrorCode::OutOfRange, "segment rectangle outside the documents");
    }
    const std::size_t n = src.size();
    const std::size_t m = tgt.size();
    AlignmentPath path;
    if (n == 0 && m == 0) {
        return path;
    }

    const std::vector<BeadShape> shapes = permitted_shapes(scorer.params());
    const std::size_t width = m + 1;
    std::vector<Cell> table((n + 1) * width);
    table[0].cost = 0.0;

    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
            if (i == 0 && j == 0) {
                continue;
            }
            Cell& cell = table[i * width + j];
            for (std::size_t s = 0; s < shapes.size(); ++s) {
                const BeadShape shape = shapes[s];
                if (shape.src > i || shape.tgt > j) {
                    continue;
                }
                const Cell& from = table[(i - shape.src) * width + (j - shape.tgt)];
                if (!std::isfinite(from.cost)) {
                    continue;
                }
                const IndexRange bs{src.begin + i - shape.src, src.begin + i};
                const IndexRange bt{tgt.begin + j - shape.tgt, tgt.begin + j};
                const double cost = from.cost + scorer.bead_cost(bs, bt);
                if (improves(cost, from.beads + 1, s, cell)) {
                    cell.cost = cost;
                    cell.beads = from.beads + 1;
                    cell.shape = s;
                }
            }
        }
    }

    const Cell& last = table[n * width + m];
    if (!std::isfinite(last.cost)) {
        throw Error(ErrorCode::NoPath, "no permitted tiling of a " + std::to_string(n) + "x" +
                                           std::to_string(m) + " segment");
    }

    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        const Cell& cell = table[i * width + j];
        const BeadShape shape = shapes[cell.shape];
        Bead bead;
        bead.src = {src.begin + i - shape.src, src.begin + i};
        bead.tgt = {tgt.begin + j - shape.tgt, tgt.begin + j};
        bead.cost = cell.cost - table[(i - shape.src) * width + (j - shape.tgt)].cost;
        path.beads.push_back(bead);
        i -= shape.src;
        j -= shape.tgt;
    }
    std::reverse(path.beads.begin(), path.beads.end());
    // Recompute from the scorer so bead costs are exact, not differences.
    path.total_cost = 0.0;
    for (auto& b : path.beads) {
        b.cost = scorer.bead_cost(b.src, b.tgt);
        path.total_cost += b.cost;
    }
    path.avg_score = path.total_cost / static_cast<double>(n + m);
    return path;
}

std::vector<AnchorPoint> select_waypoints(const AlignableInterval& interval, double sent_ratio,
                                          double local_diag_beam) {
    std::vector<AnchorPoint> inside;
    for (const auto& a : interval.anchors) {
        if (a.x >= interval.src.begin && a.x < interval.src.end && a.y >= interval.tgt.begin &&
            a.y < interval.tgt.end) {
            inside.push_back(a);
        }
    }
    auto follows = [&](const AnchorPoint& next, const AnchorPoint& prev) {
        return next.x > prev.x && next.y > prev.y &&
               deviation(next, prev, sent_ratio) <= local_diag_beam;
    };

    std::vector<AnchorPoint> waypoints;
    std::size_t start = inside.size();
    if (inside.size() == 1) {
        start = 0;
    }
    for (std::size_t i = 0; i + 1 < inside.size(); ++i) {
        if (follows(inside[i + 1], inside[i])) {
            start = i;
            break;
        }
    }
    if (start == inside.size()) {
        return waypoints;
    }
    waypoints.push_back(inside[start]);
    for (std::size_t i = start + 1; i < inside.size(); ++i) {
        if (follows(inside[i], waypoints.back())) {
            waypoints.push_back(inside[i]);
        }
    }
    return waypoints;
}

AlignmentPath align_interval(const AlignableInterval& interval, const BeadScorer& scorer,
                             double sent_ratio) {
    const auto waypoints = select_waypoints(interval, sent_ratio, scorer.params().local_diag_beam);

    AlignmentPath path;
    std::size_t x = interval.src.begin;
    std::size_t y = interval.tgt.begin;
    auto solve = [&](std::size_t x_to, std::size_t y_to) {
        AlignmentPath seg = dp_segment({x, x_to}, {y, y_to}, scorer);
        path.beads.insert(path.beads.end(), seg.beads.begin(), seg.beads.end());
        path.total_cost += seg.total_cost;
        x = x_to;
        y = y_to;
    };
    for (const auto& w : waypoints) {
        solve(w.x, w.y);
    }
    solve(interval.src.end, interval.tgt.end);

    const std::size_t sentences = interval.src.size() + interval.tgt.size();
    path.avg_score = sentences ? path.total_cost / static_cast<double>(sentences) : 0.0;
    return path;
}

} // namespace anchoralign
