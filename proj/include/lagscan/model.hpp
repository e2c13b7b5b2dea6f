#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lagscan/error.hpp"
#include "lagscan/image.hpp"

namespace lagscan {

/// Absolute tolerance for PTS comparisons, in milliseconds.
inline constexpr double kPtsToleranceMs = 1e-6;

/// Reference to a frame's pixel data: a file path, an in-memory buffer,
/// or both (the buffer wins when present).
struct ImageRef {
    std::string path;
    std::shared_ptr<const ImageU8> data;

    bool empty() const noexcept { return path.empty() && !data; }
};

struct Frame {
    std::size_t index = 0;
    double pts_ms = 0.0;
    ImageRef image;
};

/// Ordered frame sequence with strictly increasing PTS. Immutable after
/// construction; safe to share across threads.
class Screencast {
public:
    /// Validates and assembles a screencast; indices are assigned 0..n-1.
    static Screencast make(std::vector<std::pair<double, ImageRef>> frames, int width_px,
                           int height_px, std::string source_id);

    const std::vector<Frame>& frames() const noexcept { return frames_; }
    std::size_t frame_count() const noexcept { return frames_.size(); }
    const Frame& frame(std::size_t index) const;
    int width() const noexcept { return width_px_; }
    int height() const noexcept { return height_px_; }
    const std::string& source_id() const noexcept { return source_id_; }

    /// pts(f_end) - pts(f_start); requires f_start < f_end, both in range.
    double interval_duration(std::size_t f_start, std::size_t f_end) const;

private:
    std::vector<Frame> frames_;
    int width_px_ = 0;
    int height_px_ = 0;
    std::string source_id_;
};

/// Maximal interval of perceptually unchanged frames, inclusive bounds.
struct StaticRun {
    std::size_t f_start = 0;
    std::size_t f_end = 0;
    double duration_ms = 0.0;
};

enum class LagType { janky, loading, frozen };

const char* to_string(LagType type) noexcept;
LagType lag_type_from_string(std::string_view name);

struct LagInterval {
    LagType type = LagType::janky;
    std::size_t f_start = 0;
    std::size_t f_end = 0;
    double start_pts_ms = 0.0;
    double end_pts_ms = 0.0;
    double duration_ms = 0.0;
    bool severe = false;
    std::string evidence;
};

struct DetectionConfig {
    double frame_budget_ms = 16.7;
    double jank_lag_ms = 100.0;
    double frozen_lag_ms = 100.0;
    double load_lag_ms = 1000.0;
    double ssim_threshold = 0.98;
    double min_placeholder_area_fraction = 0.01;

    void validate() const;

    bool operator==(const DetectionConfig&) const = default;
};

struct SeverityConfig {
    double t_janky_ms = 200.0;
    double t_load_ms = 1500.0;
    double t_frozen_ms = 300.0;

    void validate(const DetectionConfig& detection) const;

    bool operator==(const SeverityConfig&) const = default;
};

} // namespace lagscan
