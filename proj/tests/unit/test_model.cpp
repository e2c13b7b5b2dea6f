#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lagscan/model.hpp"
#include "test_support.hpp"

using namespace lagscan;
using namespace lagscan::test;

namespace {

Screencast cast_with_pts(const std::vector<double>& pts) {
    std::vector<std::pair<double, ImageU8>> frames;
    for (const double t : pts)
        frames.emplace_back(t, ImageU8::filled(16, 16, 1, 128));
    return make_cast(std::move(frames));
}

} // namespace

TEST_CASE("make_screencast assigns indices in order") {
    const Screencast cast = cast_with_pts({0.0, 16.0, 33.0});
    REQUIRE(cast.frame_count() == 3);
    CHECK(cast.frame(0).index == 0);
    CHECK(cast.frame(1).index == 1);
    CHECK(cast.frame(2).index == 2);
    CHECK(cast.frame(1).pts_ms == doctest::Approx(16.0));
}

TEST_CASE("make_screencast rejects duplicate timestamps") {
    CHECK_THROWS_WITH_AS(cast_with_pts({0.0, 16.0, 16.0}), doctest::Contains("NonMonotonicPts"),
                         Error);
    try {
        cast_with_pts({0.0, 16.0, 12.0});
        FAIL("expected NonMonotonicPts");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::non_monotonic_pts);
    }
}

TEST_CASE("make_screencast rejects degenerate inputs") {
    try {
        cast_with_pts({0.0});
        FAIL("expected TooFewFrames");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::too_few_frames);
    }
    CHECK_THROWS_AS(cast_with_pts({-5.0, 16.0}), Error);
    CHECK_THROWS_AS(cast_with_pts({0.0, std::nan("")}), Error);
}

TEST_CASE("make_screencast rejects frames with mismatched buffers") {
    std::vector<std::pair<double, ImageRef>> frames;
    frames.emplace_back(0.0, ref_of(ImageU8::filled(16, 16, 1, 0)));
    frames.emplace_back(16.0, ref_of(ImageU8::filled(8, 8, 1, 0)));
    try {
        Screencast::make(std::move(frames), 16, 16, "x");
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dimension_mismatch);
    }
}

TEST_CASE("interval_duration subtracts presentation times") {
    const Screencast cast = cast_with_pts({0.0, 16.0, 33.0, 50.0});
    CHECK(cast.interval_duration(0, 3) == doctest::Approx(50.0));
    CHECK(cast.interval_duration(1, 2) == doctest::Approx(17.0));
}

TEST_CASE("interval_duration matches the stuck-frame timeline") {
    // f1@0, f2@16, next rendered frame f3@66: the screen is stuck 50 ms.
    const Screencast cast = cast_with_pts({0.0, 16.0, 66.0});
    CHECK(cast.interval_duration(1, 2) == doctest::Approx(50.0));
}

TEST_CASE("interval_duration rejects bad intervals") {
    const Screencast cast = cast_with_pts({0.0, 16.0, 33.0});
    try {
        cast.interval_duration(2, 1);
        FAIL("expected InvalidInterval");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_interval);
    }
    try {
        cast.interval_duration(1, 9);
        FAIL("expected IndexOutOfRange");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::index_out_of_range);
    }
    CHECK_THROWS_AS(cast.interval_duration(1, 1), Error);
}

TEST_CASE("interval durations are additive") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> pts;
        double t = rng.uniform(0.0, 10.0);
        const int n = rng.uniform_int(3, 12);
        for (int i = 0; i < n; ++i) {
            pts.push_back(t);
            t += rng.uniform(0.5, 40.0);
        }
        const Screencast cast = cast_with_pts(pts);
        const std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, n - 3));
        const std::size_t j = i + 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n - i) - 2));
        const std::size_t k = j + 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n - j) - 2));
        CHECK(cast.interval_duration(i, k) ==
              doctest::Approx(cast.interval_duration(i, j) + cast.interval_duration(j, k))
                  .epsilon(1e-12));
    }
}

TEST_CASE("pts round-trip through construction exactly") {
    const std::vector<double> pts = {0.0, 16.666666666666668, 33.333333333333336, 150.2500001};
    const Screencast cast = cast_with_pts(pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(cast.frame(i).pts_ms == pts[i]);
}

TEST_CASE("detection config invariants") {
    DetectionConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.frame_budget_ms = 120.0; // above jank_lag_ms
    CHECK_THROWS_AS(cfg.validate(), Error);

    DetectionConfig bad_ssim;
    bad_ssim.ssim_threshold = 1.0;
    CHECK_THROWS_AS(bad_ssim.validate(), Error);

    DetectionConfig negative;
    negative.load_lag_ms = -1.0;
    CHECK_THROWS_AS(negative.validate(), Error);
}

TEST_CASE("severity config must sit at or above detection thresholds") {
    const DetectionConfig detection;
    SeverityConfig sev;
    CHECK_NOTHROW(sev.validate(detection));
    sev.t_frozen_ms = 50.0; // below frozen_lag_ms
    CHECK_THROWS_AS(sev.validate(detection), Error);
}

TEST_CASE("lag type names round-trip") {
    for (const LagType type : {LagType::janky, LagType::loading, LagType::frozen})
        CHECK(lag_type_from_string(to_string(type)) == type);
    CHECK_THROWS_AS(lag_type_from_string("sluggish"), Error);
}
