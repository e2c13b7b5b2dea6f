#include "lagscan/image.hpp"

#include <algorithm>
#include <cmath>

namespace lagscan {

ImageU8 ImageU8::filled(int width, int height, int channels, std::uint8_t value) {
    ImageU8 img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.pixels.assign(static_cast<std::size_t>(width) * height * channels, value);
    return img;
}

GrayImage GrayImage::filled(int width, int height, double value) {
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

GrayImage to_grayscale(const ImageU8& image) {
    if (image.empty())
        fail(Errc::empty_image, "cannot convert empty image to grayscale");
    if (image.channels != 1 && image.channels != 3)
        fail(Errc::dimension_mismatch, "expected 1 or 3 channels, got " + std::to_string(image.channels));

    GrayImage gray;
    gray.width = image.width;
    gray.height = image.height;
    gray.pixels.resize(static_cast<std::size_t>(image.width) * image.height);

    const std::size_t n = gray.pixels.size();
    if (image.channels == 1) {
        for (std::size_t i = 0; i < n; ++i)
            gray.pixels[i] = static_cast<double>(image.pixels[i]);
    } else {
        const std::uint8_t* p = image.pixels.data();
        for (std::size_t i = 0; i < n; ++i, p += 3)
            gray.pixels[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    }
    return gray;
}

namespace {

struct Sample {
    int lo;
    int hi;
    double frac;
};

// Half-pixel-center source coordinates, clamped to the image.
std::vector<Sample> make_axis_samples(int src_size, int dst_size) {
    std::vector<Sample> samples(static_cast<std::size_t>(dst_size));
    const double scale = static_cast<double>(src_size) / dst_size;
    for (int i = 0; i < dst_size; ++i) {
        double pos = (i + 0.5) * scale - 0.5;
        pos = std::clamp(pos, 0.0, static_cast<double>(src_size - 1));
        const int lo = static_cast<int>(pos);
        samples[static_cast<std::size_t>(i)] = {lo, std::min(lo + 1, src_size - 1), pos - lo};
    }
    return samples;
}

} // namespace

GrayImage resize_bilinear(const GrayImage& src, int new_width, int new_height) {
    if (src.empty())
        fail(Errc::empty_image, "cannot resize empty image");
    if (new_width <= 0 || new_height <= 0)
        fail(Errc::dimension_mismatch, "resize target must be positive");
    if (new_width == src.width && new_height == src.height)
        return src;

    const auto xs = make_axis_samples(src.width, new_width);
    const auto ys = make_axis_samples(src.height, new_height);

    GrayImage dst;
    dst.width = new_width;
    dst.height = new_height;
    dst.pixels.resize(static_cast<std::size_t>(new_width) * new_height);
    for (int y = 0; y < new_height; ++y) {
        const Sample& sy = ys[static_cast<std::size_t>(y)];
        const double* row0 = src.pixels.data() + static_cast<std::size_t>(sy.lo) * src.width;
        const double* row1 = src.pixels.data() + static_cast<std::size_t>(sy.hi) * src.width;
        double* out = dst.pixels.data() + static_cast<std::size_t>(y) * new_width;
        for (int x = 0; x < new_width; ++x) {
            const Sample& sx = xs[static_cast<std::size_t>(x)];
            const double top = row0[sx.lo] + (row0[sx.hi] - row0[sx.lo]) * sx.frac;
            const double bot = row1[sx.lo] + (row1[sx.hi] - row1[sx.lo]) * sx.frac;
            out[x] = top + (bot - top) * sy.frac;
        }
    }
    return dst;
}

ImageU8 resize_bilinear(const ImageU8& src, int new_width, int new_height) {
    if (src.empty())
        fail(Errc::empty_image, "cannot resize empty image");
    if (new_width <= 0 || new_height <= 0)
        fail(Errc::dimension_mismatch, "resize target must be positive");
    if (new_width == src.width && new_height == src.height)
        return src;

    const auto xs = make_axis_samples(src.width, new_width);
    const auto ys = make_axis_samples(src.height, new_height);
    const int ch = src.channels;

    ImageU8 dst;
    dst.width = new_width;
    dst.height = new_height;
    dst.channels = ch;
    dst.pixels.resize(static_cast<std::size_t>(new_width) * new_height * ch);
    for (int y = 0; y < new_height; ++y) {
        const Sample& sy = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < new_width; ++x) {
            const Sample& sx = xs[static_cast<std::size_t>(x)];
            for (int c = 0; c < ch; ++c) {
                const double v00 = src.at(sx.lo, sy.lo, c);
                const double v10 = src.at(sx.hi, sy.lo, c);
                const double v01 = src.at(sx.lo, sy.hi, c);
                const double v11 = src.at(sx.hi, sy.hi, c);
                const double top = v00 + (v10 - v00) * sx.frac;
                const double bot = v01 + (v11 - v01) * sx.frac;
                const double v = top + (bot - top) * sy.frac;
                dst.at(x, y, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return dst;
}

namespace {

std::pair<int, int> max_dim_target(int width, int height, int max_dim) {
    const int cur = std::max(width, height);
    const double scale = static_cast<double>(max_dim) / cur;
    int w = std::max(1, static_cast<int>(std::lround(width * scale)));
    int h = std::max(1, static_cast<int>(std::lround(height * scale)));
    if (width >= height)
        w = max_dim;
    else
        h = max_dim;
    return {w, h};
}

} // namespace

GrayImage downscale_to_max_dim(const GrayImage& src, int max_dim) {
    if (src.empty())
        fail(Errc::empty_image, "cannot resize empty image");
    if (std::max(src.width, src.height) <= max_dim)
        return src;
    const auto [w, h] = max_dim_target(src.width, src.height, max_dim);
    return resize_bilinear(src, w, h);
}

ImageU8 downscale_to_max_dim(const ImageU8& src, int max_dim) {
    if (src.empty())
        fail(Errc::empty_image, "cannot resize empty image");
    if (std::max(src.width, src.height) <= max_dim)
        return src;
    const auto [w, h] = max_dim_target(src.width, src.height, max_dim);
    return resize_bilinear(src, w, h);
}

} // namespace lagscan
