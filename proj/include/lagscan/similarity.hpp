#pragma once

#include <optional>
#include <vector>

#include "lagscan/image.hpp"
#include "lagscan/model.hpp"

namespace lagscan {

/// Windowed SSIM parameters. Defaults follow the standard formulation:
/// 11x11 Gaussian window, sigma 1.5, K1 0.01, K2 0.03, L 255.
struct SsimParams {
    int window_size = 11;
    double gaussian_sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 255.0;
    /// Frames larger than this are bilinearly shrunk before comparison;
    /// nullopt compares at full resolution.
    std::optional<int> downscale_max_dim = 360;

    void validate() const;

    bool operator==(const SsimParams&) const = default;
};

struct PairScore {
    std::size_t prev_index = 0;
    std::size_t next_index = 0;
    double score = 0.0;
};

/// Mean local SSIM over all window positions, Gaussian-weighted, valid
/// region only (no border padding). Result lies in [-1, 1].
double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params = {});

/// Decodes a frame (buffer or path), converts to grayscale and applies
/// the configured downscale. This is the canonical pre-SSIM transform.
GrayImage analysis_image(const Frame& frame, const SsimParams& params = {});

/// Score of every consecutive frame pair, in frame order; exactly
/// frame_count-1 entries. threads = 0 uses all hardware threads.
std::vector<PairScore> pairwise_scores(const Screencast& cast, const SsimParams& params = {},
                                       unsigned threads = 0);

} // namespace lagscan
