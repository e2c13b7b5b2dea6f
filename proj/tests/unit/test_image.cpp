#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lagscan/image.hpp"
#include "lagscan/image_io.hpp"
#include "test_support.hpp"

using namespace lagscan;
using namespace lagscan::test;

TEST_CASE("grayscale of white is 255 everywhere") {
    const GrayImage gray = to_grayscale(ImageU8::filled(8, 4, 3, 255));
    for (const double v : gray.pixels)
        CHECK(v == doctest::Approx(255.0)); // weights sum to 1
}

TEST_CASE("grayscale of pure red uses the red weight") {
    ImageU8 red = ImageU8::filled(4, 4, 3, 0);
    for (int i = 0; i < 16; ++i)
        red.pixels[static_cast<std::size_t>(i) * 3] = 255;
    const GrayImage gray = to_grayscale(red);
    for (const double v : gray.pixels)
        CHECK(v == doctest::Approx(76.245)); // 0.299 * 255
}

TEST_CASE("grayscale rejects empty images") {
    try {
        to_grayscale(ImageU8{});
        FAIL("expected EmptyImage");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::empty_image);
    }
}

TEST_CASE("single-channel input passes through grayscale") {
    const ImageU8 img = random_u8(6, 5, 11, 1);
    const GrayImage gray = to_grayscale(img);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        CHECK(gray.pixels[i] == doctest::Approx(static_cast<double>(img.pixels[i])));
}

TEST_CASE("bilinear resize keeps constant images constant") {
    const GrayImage src = GrayImage::filled(64, 48, 93.5);
    const GrayImage dst = resize_bilinear(src, 17, 23);
    REQUIRE(dst.width == 17);
    REQUIRE(dst.height == 23);
    for (const double v : dst.pixels)
        CHECK(v == doctest::Approx(93.5));
}

TEST_CASE("downscale_to_max_dim shrinks only when needed") {
    const GrayImage big = random_gray(1080, 2400, 3);
    const GrayImage scaled = downscale_to_max_dim(big, 360);
    CHECK(scaled.height == 360);
    CHECK(scaled.width == 162);

    const GrayImage small = random_gray(180, 320, 4);
    const GrayImage same = downscale_to_max_dim(small, 360);
    CHECK(same.width == 180);
    CHECK(same.height == 320);
}

TEST_CASE("png round-trip preserves pixels") {
    TempDir dir("png");
    for (const int channels : {1, 3}) {
        const ImageU8 img = random_u8(31, 17, 100 + channels, channels);
        const std::string path = dir.str("img_" + std::to_string(channels) + ".png");
        save_png(img, path);
        const ImageU8 back = load_image(path);
        CHECK(back == img);
    }
}

TEST_CASE("loading a missing image fails") {
    try {
        load_image("/nonexistent/nothing.png");
        FAIL("expected MissingImage");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::missing_image);
    }
}

TEST_CASE("encode_png produces a decodable blob") {
    const ImageU8 img = random_u8(20, 12, 55, 3);
    const auto blob = encode_png(img);
    CHECK(blob.size() > 8);
    // PNG signature
    CHECK(blob[1] == 'P');
    CHECK(blob[2] == 'N');
    CHECK(blob[3] == 'G');
}
