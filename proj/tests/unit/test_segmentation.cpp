#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "lagscan/segmentation.hpp"
#include "test_support.hpp"

using namespace lagscan;
using namespace lagscan::test;

namespace {

std::vector<PairScore> scores_from_bools(const std::vector<bool>& above) {
    std::vector<PairScore> scores;
    for (std::size_t i = 0; i < above.size(); ++i)
        scores.push_back(PairScore{i, i + 1, above[i] ? 0.995 : 0.4});
    return scores;
}

std::vector<double> grid_pts(std::size_t frames, double step = 16.0) {
    std::vector<double> pts(frames);
    for (std::size_t i = 0; i < frames; ++i)
        pts[i] = static_cast<double>(i) * step;
    return pts;
}

// Correct-by-construction oracle: [i, j] is a run iff all pairs inside are
// above threshold and both boundary pairs (when they exist) are below.
std::vector<StaticRun> brute_force_runs(const std::vector<bool>& above,
                                        const std::vector<double>& pts) {
    std::vector<StaticRun> runs;
    const std::size_t n = above.size();
    for (std::size_t start = 0; start < n; ++start) {
        if (!above[start] || (start > 0 && above[start - 1]))
            continue;
        std::size_t end = start;
        while (end + 1 < n && above[end + 1])
            ++end;
        runs.push_back(StaticRun{start, end + 1, pts[end + 1] - pts[start]});
    }
    return runs;
}

} // namespace

TEST_CASE("the first unchanged frame opens the run") {
    // Pairs (2,3)..(5,6) above threshold: static frames from f2 to f6.
    std::vector<bool> above(8, false);
    for (std::size_t p = 2; p <= 5; ++p)
        above[p] = true;
    const auto runs = extract_static_runs(scores_from_bools(above), 0.98, grid_pts(9));
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].f_start == 2);
    CHECK(runs[0].f_end == 6);
    CHECK(runs[0].duration_ms == doctest::Approx(4 * 16.0));
}

TEST_CASE("no static content yields no runs") {
    const auto runs =
        extract_static_runs(scores_from_bools({false, false, false}), 0.98, grid_pts(4));
    CHECK(runs.empty());
}

TEST_CASE("single-pair runs are kept") {
    const auto runs =
        extract_static_runs(scores_from_bools({false, true, false}), 0.98, grid_pts(4));
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].f_start == 1);
    CHECK(runs[0].f_end == 2);
}

TEST_CASE("empty score list is an error") {
    try {
        extract_static_runs(std::vector<PairScore>{}, 0.98, grid_pts(1));
        FAIL("expected EmptyScores");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_scores);
    }
}

TEST_CASE("segmentation matches the brute-force scanner on random sequences") {
    Rng rng(555);
    for (int trial = 0; trial < 1000; ++trial) {
        const int pairs = rng.uniform_int(1, 40);
        std::vector<bool> above(static_cast<std::size_t>(pairs));
        for (auto&& flag : above)
            flag = rng.coin();
        const auto pts = grid_pts(static_cast<std::size_t>(pairs) + 1);
        const auto got = extract_static_runs(scores_from_bools(above), 0.98, pts);
        const auto want = brute_force_runs(above, pts);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].f_start == want[i].f_start);
            CHECK(got[i].f_end == want[i].f_end);
            CHECK(got[i].duration_ms == doctest::Approx(want[i].duration_ms));
        }
    }
}

TEST_CASE("runs are maximal, disjoint, sorted, and cover every above pair") {
    Rng rng(808);
    for (int trial = 0; trial < 200; ++trial) {
        const int pairs = rng.uniform_int(1, 60);
        std::vector<PairScore> scores;
        for (int p = 0; p < pairs; ++p)
            scores.push_back(
                PairScore{static_cast<std::size_t>(p), static_cast<std::size_t>(p) + 1,
                          rng.uniform(0.8, 1.0)});
        const double threshold = 0.9;
        const auto pts = grid_pts(static_cast<std::size_t>(pairs) + 1);
        const auto runs = extract_static_runs(scores, threshold, pts);

        std::size_t prev_end = 0;
        bool first = true;
        for (const StaticRun& run : runs) {
            CHECK(run.f_start < run.f_end);
            CHECK(run.duration_ms > 0.0);
            if (!first)
                CHECK(run.f_start > prev_end); // disjoint and sorted
            first = false;
            prev_end = run.f_end;
            // Maximality: boundary pairs fall below the threshold.
            if (run.f_start > 0)
                CHECK(scores[run.f_start - 1].score < threshold);
            if (run.f_end < static_cast<std::size_t>(pairs))
                CHECK(scores[run.f_end].score < threshold);
        }
        // Coverage: every above-threshold pair sits inside exactly one run.
        for (int p = 0; p < pairs; ++p) {
            if (scores[static_cast<std::size_t>(p)].score < threshold)
                continue;
            int containing = 0;
            for (const StaticRun& run : runs)
                if (run.f_start <= static_cast<std::size_t>(p) &&
                    static_cast<std::size_t>(p) < run.f_end)
                    ++containing;
            CHECK(containing == 1);
        }
    }
}

TEST_CASE("raising the threshold never lengthens runs") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int pairs = rng.uniform_int(2, 40);
        std::vector<PairScore> scores;
        for (int p = 0; p < pairs; ++p)
            scores.push_back(
                PairScore{static_cast<std::size_t>(p), static_cast<std::size_t>(p) + 1,
                          rng.uniform(0.0, 1.0)});
        const auto pts = grid_pts(static_cast<std::size_t>(pairs) + 1);
        const auto low = extract_static_runs(scores, 0.3, pts);
        const auto high = extract_static_runs(scores, 0.7, pts);
        // Every high-threshold run must be contained in some low-threshold run.
        for (const StaticRun& hr : high) {
            bool contained = false;
            for (const StaticRun& lr : low)
                if (lr.f_start <= hr.f_start && hr.f_end <= lr.f_end)
                    contained = true;
            CHECK(contained);
        }
    }
}
