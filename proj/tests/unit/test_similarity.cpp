#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lagscan/similarity.hpp"
#include "ssim_reference.hpp"
#include "test_support.hpp"

using namespace lagscan;
using namespace lagscan::test;

TEST_CASE("ssim of an image with itself is 1") {
    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
        const GrayImage img = random_gray(48, 32, seed);
        CHECK(std::abs(ssim(img, img) - 1.0) < 1e-9);
    }
}

TEST_CASE("ssim is symmetric") {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        const GrayImage a = random_gray(40, 40, rng.next());
        const GrayImage b = random_gray(40, 40, rng.next());
        CHECK(std::abs(ssim(a, b) - ssim(b, a)) < 1e-9);
    }
}

TEST_CASE("ssim stays within [-1, 1]") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const GrayImage a = random_gray(24, 24, rng.next());
        const GrayImage b = random_gray(24, 24, rng.next());
        const double score = ssim(a, b);
        CHECK(score <= 1.0 + 1e-12);
        CHECK(score >= -1.0 - 1e-12);
    }
}

TEST_CASE("constant images reproduce the closed-form score") {
    // All-zero vs all-255: sigma terms vanish, so the score reduces to
    // (C1 * C2) / ((255^2 + C1) * C2) = C1 / (255^2 + C1).
    const SsimParams params;
    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double expected = c1 / (255.0 * 255.0 + c1);
    const GrayImage black = GrayImage::filled(32, 32, 0.0);
    const GrayImage white = GrayImage::filled(32, 32, 255.0);
    CHECK(std::abs(ssim(black, white) - expected) < 1e-8);
    CHECK(expected == doctest::Approx(1.0001e-4).epsilon(1e-3));
}

TEST_CASE("optimized ssim matches the naive reference") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const GrayImage a = random_gray(64, 64, rng.next());
        const GrayImage b = random_gray(64, 64, rng.next());
        const double fast = ssim(a, b);
        const double slow = ssim_reference(a, b);
        CHECK(std::abs(fast - slow) < 1e-6);
    }
}

TEST_CASE("luminance shift strictly lowers the score") {
    const GrayImage base = GrayImage::filled(24, 24, 60.0);
    double prev = 1.0;
    for (const double delta : {8.0, 32.0, 128.0}) {
        const GrayImage shifted = GrayImage::filled(24, 24, 60.0 + delta);
        const double score = ssim(base, shifted);
        CHECK(score < prev);
        prev = score;
    }
}

TEST_CASE("ssim validates its inputs") {
    const GrayImage small = random_gray(8, 8, 1);
    const GrayImage normal = random_gray(32, 32, 2);
    try {
        ssim(small, small);
        FAIL("expected ImageTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::image_too_small);
    }
    try {
        ssim(normal, random_gray(16, 32, 3));
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::dimension_mismatch);
    }
    SsimParams bad;
    bad.window_size = 10;
    CHECK_THROWS_AS(ssim(normal, normal, bad), Error);
}

TEST_CASE("pairwise_scores covers every consecutive pair in order") {
    std::vector<std::pair<double, ImageU8>> frames;
    for (int i = 0; i < 3; ++i)
        frames.emplace_back(i * 16.0, random_u8(32, 32, 10 + i));
    const Screencast cast = make_cast(std::move(frames));
    const auto scores = pairwise_scores(cast);
    REQUIRE(scores.size() == 2);
    CHECK(scores[0].prev_index == 0);
    CHECK(scores[0].next_index == 1);
    CHECK(scores[1].prev_index == 1);
    CHECK(scores[1].next_index == 2);
}

TEST_CASE("identical frames score 1 pairwise") {
    const ImageU8 img = random_u8(32, 32, 5);
    std::vector<std::pair<double, ImageU8>> frames;
    for (int i = 0; i < 4; ++i)
        frames.emplace_back(i * 16.0, img);
    const auto scores = pairwise_scores(make_cast(std::move(frames)));
    for (const PairScore& s : scores)
        CHECK(std::abs(s.score - 1.0) < 1e-9);
}

TEST_CASE("pairwise_scores is deterministic across thread counts") {
    std::vector<std::pair<double, ImageU8>> frames;
    Rng rng(31);
    for (int i = 0; i < 24; ++i)
        frames.emplace_back(i * 16.0, random_u8(48, 48, rng.next()));
    const Screencast cast = make_cast(std::move(frames));
    const auto seq = pairwise_scores(cast, {}, 1);
    const auto par = pairwise_scores(cast, {}, 4);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        CHECK(seq[i].score == par[i].score);
}

TEST_CASE("large frames are compared downscaled") {
    // 720x1280 with downscale 360 lands at 203x360; identity must hold.
    const ImageU8 img = random_u8(720, 1280, 8);
    std::vector<std::pair<double, ImageU8>> frames{{0.0, img}, {16.0, img}};
    const auto scores = pairwise_scores(make_cast(std::move(frames)));
    REQUIRE(scores.size() == 1);
    CHECK(std::abs(scores[0].score - 1.0) < 1e-9);
}
