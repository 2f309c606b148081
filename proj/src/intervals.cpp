#include "anchoralign/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anchoralign/error.hpp"

namespace anchoralign {

namespace {

bool monotonic(const std::vector<const AnchorPoint*>& seq) {
    for (std::size_t i = 1; i < seq.size(); ++i) {
        if (seq[i]->x < seq[i - 1]->x || seq[i]->y < seq[i - 1]->y) {
            return false;
        }
    }
    return true;
}

double euclidean(const AnchorPoint& a, const AnchorPoint& b) {
    const double dx = static_cast<double>(a.x) - static_cast<double>(b.x);
    const double dy = static_cast<double>(a.y) - static_cast<double>(b.y);
    return std::hypot(dx, dy);
}

AlignableInterval make_interval(std::vector<AnchorPoint> anchors) {
    AlignableInterval iv;
    iv.core_src = {anchors.front().x, anchors.back().x + 1};
    iv.core_tgt = {anchors.front().y, anchors.back().y + 1};
    iv.src = iv.core_src;
    iv.tgt = iv.core_tgt;
    iv.anchors = std::move(anchors);
    return iv;
}

bool overlaps(IndexRange a, IndexRange b) {
    return a.begin < b.end && b.begin < a.end;
}

// Grows the bounds of each interval halfway towards its neighbours along one
// axis. `order` lists interval indices sorted by core start on that axis.
template <class Core, class Bounds>
void extend_axis(std::vector<AlignableInterval>& intervals, const std::vector<std::size_t>& order,
                 std::size_t limit, Core core, Bounds bounds) {
    for (std::size_t k = 0; k < order.size(); ++k) {
        AlignableInterval& iv = intervals[order[k]];
        IndexRange& b = bounds(iv);
        const IndexRange c = core(iv);
        if (k == 0) {
            b.begin = 0;
        } else {
            const IndexRange prev = core(intervals[order[k - 1]]);
            b.begin = (prev.end - 1 + c.begin) / 2 + 1;
        }
        if (k + 1 == order.size()) {
            b.end = limit;
        } else {
            const IndexRange next = core(intervals[order[k + 1]]);
            b.end = (c.end - 1 + next.begin) / 2 + 1;
        }
    }
}

} // namespace

void IntervalParams::validate() const {
    if (!(deviation_ignore_threshold > 0.0) || !(max_dist_to_the_diagonal > 0.0) ||
        !(max_gap_size > 0.0) || !(min_horizontal_density > 0.0)) {
        throw Error(ErrorCode::Config, "interval thresholds must be positive");
    }
}

double AlignableInterval::horizontal_density() const {
    if (core_src.empty()) {
        return 0.0;
    }
    return static_cast<double>(anchors.size()) / static_cast<double>(core_src.size());
}

double deviation(const AnchorPoint& curr, const AnchorPoint& prev, double sent_ratio) {
    const double expected =
        static_cast<double>(prev.y) +
        (static_cast<double>(curr.x) - static_cast<double>(prev.x)) * sent_ratio;
    return std::abs(static_cast<double>(curr.y) - expected);
}

std::vector<bool> monotonicity_outliers(const std::vector<AnchorPoint>& anchors) {
    const std::size_t n = anchors.size();
    std::vector<bool> drop(n, false);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        std::vector<const AnchorPoint*> neighbours;
        if (i >= 2) {
            neighbours.push_back(&anchors[i - 2]);
        }
        neighbours.push_back(&anchors[i - 1]);
        neighbours.push_back(&anchors[i + 1]);
        if (i + 2 < n) {
            neighbours.push_back(&anchors[i + 2]);
        }
        if (!monotonic(neighbours)) {
            continue;
        }
        const AnchorPoint& a = anchors[i];
        const AnchorPoint& before = anchors[i - 1];
        const AnchorPoint& after = anchors[i + 1];
        const bool fits = before.x <= a.x && a.x <= after.x && before.y <= a.y && a.y <= after.y;
        drop[i] = !fits;
    }
    return drop;
}

std::vector<AlignableInterval> extract_intervals(const std::vector<AnchorPoint>& anchors,
                                                 const IntervalParams& params, double sent_ratio,
                                                 double min_density_ratio, std::size_t n_src,
                                                 std::size_t n_tgt) {
    params.validate();
    const std::vector<bool> outlier = monotonicity_outliers(anchors);
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (!outlier[i]) {
            live.push_back(i);
        }
    }

    std::vector<std::vector<AnchorPoint>> raw;
    std::vector<AnchorPoint> current;
    const AnchorPoint* prev = nullptr;
    for (std::size_t t = 0; t < live.size(); ++t) {
        const AnchorPoint& a = anchors[live[t]];
        if (prev == nullptr) {
            current.push_back(a);
            prev = &a;
            continue;
        }
        const double dev = deviation(a, *prev, sent_ratio);
        const bool forward = a.y > prev->y && a.x > prev->x;
        if ((dev > params.deviation_ignore_threshold || a.y < prev->y) &&
            a.density_ratio < min_density_ratio) {
            continue;
        }
        if (dev < params.max_dist_to_the_diagonal && forward) {
            current.push_back(a);
            prev = &a;
            continue;
        }
        bool aligned_with_next = false;
        if (t + 1 < live.size()) {
            const AnchorPoint& next = anchors[live[t + 1]];
            aligned_with_next = next.y > a.y &&
                                deviation(next, a, sent_ratio) < params.max_dist_to_the_diagonal;
        }
        const bool opens = (aligned_with_next && a.density_ratio > min_density_ratio) ||
                           (euclidean(a, *prev) > params.max_gap_size &&
                            a.density_ratio > 1.5 * min_density_ratio);
        if (!opens) {
            continue;
        }
        raw.push_back(std::move(current));
        current.clear();
        current.push_back(a);
        prev = &a;
    }
    if (!current.empty()) {
        raw.push_back(std::move(current));
    }

    std::vector<AlignableInterval> kept;
    for (auto& group : raw) {
        if (group.size() < 2) {
            continue;
        }
        AlignableInterval iv = make_interval(std::move(group));
        if (iv.horizontal_density() >= params.min_horizontal_density) {
            kept.push_back(std::move(iv));
        }
    }

    // Target ranges must not overlap. Larger intervals win, except that a
    // smaller one sitting entirely inside a target gap between two consecutive
    // anchors of a larger one splits it there. This happens when a jump between
    // two unrelated regions happens to look diagonal.
    std::vector<std::size_t> by_size(kept.size());
    std::iota(by_size.begin(), by_size.end(), 0);
    std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t a, std::size_t b) {
        return kept[a].anchors.size() > kept[b].anchors.size();
    });
    auto valid = [&](const AlignableInterval& iv) {
        return iv.anchors.size() >= 2 && iv.horizontal_density() >= params.min_horizontal_density;
    };
    std::vector<AlignableInterval> out;
    for (std::size_t idx : by_size) {
        AlignableInterval& cand = kept[idx];
        const IndexRange r = cand.core_tgt;
        bool accept = true;
        std::vector<std::pair<std::size_t, std::size_t>> splits;  // (interval, anchor before the gap)
        for (std::size_t o = 0; o < out.size() && accept; ++o) {
            if (!overlaps(r, out[o].core_tgt)) {
                continue;
            }
            const auto& an = out[o].anchors;
            const auto gap = std::find_if(an.begin() + 1, an.end(), [&](const AnchorPoint& a) { return a.y >= r.end; });
            const std::size_t j = static_cast<std::size_t>(gap - an.begin()) - 1;
            if (gap == an.end() || an[j].y >= r.begin) {
                accept = false;
                break;
            }
            const AlignableInterval left = make_interval({an.begin(), an.begin() + static_cast<std::ptrdiff_t>(j) + 1});
            const AlignableInterval right = make_interval({an.begin() + static_cast<std::ptrdiff_t>(j) + 1, an.end()});
            accept = valid(left) && valid(right);
            splits.emplace_back(o, j);
        }
        if (!accept) {
            continue;
        }
        for (const auto& [o, j] : splits) {
            auto an = std::move(out[o].anchors);
            const auto cut = an.begin() + static_cast<std::ptrdiff_t>(j) + 1;
            out[o] = make_interval({an.begin(), cut});
            out.push_back(make_interval({cut, an.end()}));
        }
        out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(), [](const AlignableInterval& a, const AlignableInterval& b) {
        return a.core_src.begin < b.core_src.begin;
    });

    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    extend_axis(out, order, n_src, [](const AlignableInterval& iv) { return iv.core_src; },
                [](AlignableInterval& iv) -> IndexRange& { return iv.src; });
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return out[a].core_tgt.begin < out[b].core_tgt.begin; });
    extend_axis(out, order, n_tgt, [](const AlignableInterval& iv) { return iv.core_tgt; },
                [](AlignableInterval& iv) -> IndexRange& { return iv.tgt; });
    return out;
}

AlignableInterval whole_document_interval(const std::vector<AnchorPoint>& anchors, std::size_t n_src,
                                          std::size_t n_tgt) {
    AlignableInterval iv;
    iv.src = {0, n_src};
    iv.tgt = {0, n_tgt};
    iv.core_src = iv.src;
    iv.core_tgt = iv.tgt;
    iv.anchors = anchors;
    return iv;
}

RatioEstimates estimate_ratios(const std::vector<AlignableInterval>& intervals, const SentenceDoc& src,
                               const SentenceDoc& tgt) {
    if (intervals.empty()) {
        throw Error(ErrorCode::EmptyIntervals, "cannot estimate ratios without intervals");
    }
    std::size_t src_sents = 0;
    std::size_t tgt_sents = 0;
    std::size_t src_chars = 0;
    std::size_t tgt_chars = 0;
    for (const auto& iv : intervals) {
        src_sents += iv.core_src.size();
        tgt_sents += iv.core_tgt.size();
        src_chars += src.chars_in(iv.core_src);
        tgt_chars += tgt.chars_in(iv.core_tgt);
    }
    RatioEstimates r;
    if (src_sents > 0 && tgt_sents > 0) {
        r.sent_ratio = static_cast<double>(tgt_sents) / static_cast<double>(src_sents);
    }
    if (src_chars > 0 && tgt_chars > 0) {
        r.char_ratio = static_cast<double>(tgt_chars) / static_cast<double>(src_chars);
    }
    return r;
}

RatioEstimates document_ratios(const SentenceDoc& src, const SentenceDoc& tgt) {
    RatioEstimates r;
    if (src.size() > 0 && tgt.size() > 0) {
        r.sent_ratio = static_cast<double>(tgt.size()) / static_cast<double>(src.size());
    }
    if (src.total_chars() > 0 && tgt.total_chars() > 0) {
        r.char_ratio = static_cast<double>(tgt.total_chars()) / static_cast<double>(src.total_chars());
    }
    return r;
}

AdaptiveResult adaptive_pass(const CandidateLists& rows, const CandidateLists& cols,
                             const SentenceDoc& src, const SentenceDoc& tgt, AnchorParams anchor_params,
                             const IntervalParams& params, RatioEstimates initial) {
    const std::size_t n_src = src.size();
    const std::size_t n_tgt = tgt.size();

    anchor_params.sent_ratio = initial.sent_ratio;
    AdaptiveResult first;
    first.anchors = extract_anchors(rows, cols, anchor_params, n_src, n_tgt);
    first.intervals = extract_intervals(first.anchors, params, initial.sent_ratio,
                                        anchor_params.min_density_ratio, n_src, n_tgt);
    first.ratios = initial;
    if (first.intervals.empty()) {
        first.intervals.push_back(whole_document_interval(first.anchors, n_src, n_tgt));
        first.fell_back = true;
        return first;
    }

    AdaptiveResult second;
    second.ratios = estimate_ratios(first.intervals, src, tgt);
    anchor_params.sent_ratio = second.ratios.sent_ratio;
    second.anchors = extract_anchors(rows, cols, anchor_params, n_src, n_tgt);
    second.intervals = extract_intervals(second.anchors, params, second.ratios.sent_ratio,
                                         anchor_params.min_density_ratio, n_src, n_tgt);
    if (second.intervals.empty()) {
        return first;
    }
    return second;
}

} // namespace anchoralign
