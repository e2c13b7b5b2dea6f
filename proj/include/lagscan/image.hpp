#pragma once

#include <cstdint>
#include <vector>

#include "lagscan/error.hpp"

namespace lagscan {

/// Interleaved 8-bit image, row-major. channels is 1 (gray) or 3 (RGB).
struct ImageU8 {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    bool empty() const noexcept { return width <= 0 || height <= 0 || pixels.empty(); }
    std::uint8_t& at(int x, int y, int c = 0) {
        return pixels[static_cast<std::size_t>(y) * width * channels + static_cast<std::size_t>(x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return pixels[static_cast<std::size_t>(y) * width * channels + static_cast<std::size_t>(x) * channels + c];
    }

    static ImageU8 filled(int width, int height, int channels, std::uint8_t value);

    bool operator==(const ImageU8&) const = default;
};

/// Real-valued single-channel image used by the analysis pipeline.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    bool empty() const noexcept { return width <= 0 || height <= 0 || pixels.empty(); }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    static GrayImage filled(int width, int height, double value);
};

/// Rec.601 luma: 0.299 R + 0.587 G + 0.114 B. Gray input passes through.
GrayImage to_grayscale(const ImageU8& image);

GrayImage resize_bilinear(const GrayImage& src, int new_width, int new_height);
ImageU8 resize_bilinear(const ImageU8& src, int new_width, int new_height);

/// Shrinks so max(width, height) == max_dim; images already within the
/// bound are returned unchanged.
GrayImage downscale_to_max_dim(const GrayImage& src, int max_dim);
ImageU8 downscale_to_max_dim(const ImageU8& src, int max_dim);

} // namespace lagscan
