#include "lagscan/model.hpp"

#include <cmath>

namespace lagscan {

Screencast Screencast::make(std::vector<std::pair<double, ImageRef>> frames, int width_px,
                            int height_px, std::string source_id) {
    if (frames.size() < 2)
        fail(Errc::too_few_frames, "screencast needs at least 2 frames, got " +
                                       std::to_string(frames.size()));
    if (width_px <= 0 || height_px <= 0)
        fail(Errc::dimension_mismatch, "display dimensions must be positive");

    Screencast cast;
    cast.width_px_ = width_px;
    cast.height_px_ = height_px;
    cast.source_id_ = std::move(source_id);
    cast.frames_.reserve(frames.size());

    double prev_pts = 0.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const double pts = frames[i].first;
        if (!std::isfinite(pts) || pts < 0.0)
            fail(Errc::non_monotonic_pts,
                 "frame " + std::to_string(i) + " has invalid pts " + std::to_string(pts));
        if (i > 0 && pts - prev_pts <= kPtsToleranceMs)
            fail(Errc::non_monotonic_pts, "pts not strictly increasing at frame " +
                                              std::to_string(i) + " (" + std::to_string(prev_pts) +
                                              " -> " + std::to_string(pts) + ")");
        if (const auto& data = frames[i].second.data;
            data && (data->width != width_px || data->height != height_px))
            fail(Errc::dimension_mismatch,
                 "frame " + std::to_string(i) + " is " + std::to_string(data->width) + "x" +
                     std::to_string(data->height) + ", expected " + std::to_string(width_px) +
                     "x" + std::to_string(height_px));
        cast.frames_.push_back(Frame{i, pts, std::move(frames[i].second)});
        prev_pts = pts;
    }
    return cast;
}

const Frame& Screencast::frame(std::size_t index) const {
    if (index >= frames_.size())
        fail(Errc::index_out_of_range,
             "frame index " + std::to_string(index) + " out of range (count " +
                 std::to_string(frames_.size()) + ")");
    return frames_[index];
}

double Screencast::interval_duration(std::size_t f_start, std::size_t f_end) const {
    if (f_start >= frames_.size() || f_end >= frames_.size())
        fail(Errc::index_out_of_range, "interval [" + std::to_string(f_start) + "," +
                                           std::to_string(f_end) + "] out of range (count " +
                                           std::to_string(frames_.size()) + ")");
    if (f_start >= f_end)
        fail(Errc::invalid_interval,
             "interval requires f_start < f_end, got [" + std::to_string(f_start) + "," +
                 std::to_string(f_end) + "]");
    return frames_[f_end].pts_ms - frames_[f_start].pts_ms;
}

const char* to_string(LagType type) noexcept {
    switch (type) {
    case LagType::janky: return "janky";
    case LagType::loading: return "loading";
    case LagType::frozen: return "frozen";
    }
    return "unknown";
}

LagType lag_type_from_string(std::string_view name) {
    if (name == "janky") return LagType::janky;
    if (name == "loading") return LagType::loading;
    if (name == "frozen") return LagType::frozen;
    fail(Errc::parse_error, "unknown lag type '" + std::string(name) + "'");
}

void DetectionConfig::validate() const {
    if (!(frame_budget_ms > 0.0 && jank_lag_ms > 0.0 && frozen_lag_ms > 0.0 && load_lag_ms > 0.0))
        fail(Errc::bad_config, "detection thresholds must be positive");
    if (!(frame_budget_ms < jank_lag_ms))
        fail(Errc::bad_config, "frame_budget_ms must be below jank_lag_ms");
    if (!(ssim_threshold > 0.0 && ssim_threshold < 1.0))
        fail(Errc::bad_config, "ssim_threshold must lie in (0,1)");
    if (!(min_placeholder_area_fraction > 0.0 && min_placeholder_area_fraction <= 1.0))
        fail(Errc::bad_config, "min_placeholder_area_fraction must lie in (0,1]");
}

void SeverityConfig::validate(const DetectionConfig& detection) const {
    if (t_janky_ms < detection.jank_lag_ms)
        fail(Errc::bad_config, "t_janky_ms below the janky detection threshold");
    if (t_load_ms < detection.load_lag_ms)
        fail(Errc::bad_config, "t_load_ms below the loading detection threshold");
    if (t_frozen_ms < detection.frozen_lag_ms)
        fail(Errc::bad_config, "t_frozen_ms below the frozen detection threshold");
}

} // namespace lagscan
