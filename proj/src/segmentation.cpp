#include "lagscan/segmentation.hpp"

namespace lagscan {

std::vector<StaticRun> extract_static_runs(std::span<const PairScore> scores, double threshold,
                                           std::span<const double> pts) {
    if (scores.empty())
        fail(Errc::empty_scores, "no pair scores to segment");

    std::vector<StaticRun> runs;
    std::size_t i = 0;
    while (i < scores.size()) {
        if (scores[i].score < threshold) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < scores.size() && scores[j + 1].score >= threshold)
            ++j;
        const std::size_t f_start = scores[i].prev_index;
        const std::size_t f_end = scores[j].next_index;
        if (f_end >= pts.size())
            fail(Errc::index_out_of_range, "pair score references frame " +
                                               std::to_string(f_end) + " beyond pts table");
        runs.push_back(StaticRun{f_start, f_end, pts[f_end] - pts[f_start]});
        i = j + 1;
    }
    return runs;
}

std::vector<StaticRun> extract_static_runs(std::span<const PairScore> scores, double threshold,
                                           const Screencast& cast) {
    std::vector<double> pts;
    pts.reserve(cast.frame_count());
    for (const Frame& f : cast.frames())
        pts.push_back(f.pts_ms);
    return extract_static_runs(scores, threshold, pts);
}

} // namespace lagscan
