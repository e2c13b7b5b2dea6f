#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "lagscan/image.hpp"

namespace lagscan {

/// Axis-aligned box marking unloaded content within a frame.
struct PlaceholderRegion {
    enum class Source { heuristic, external };

    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    double confidence = 0.0;
    Source source = Source::heuristic;
};

struct DetectorSpec {
    enum class Kind { heuristic, external };

    Kind kind = Kind::heuristic;
    /// Shell command of the external detector process (required iff external).
    std::string external_cmd;
    double confidence_floor = 0.5;
    double timeout_sec = 10.0;

    // Heuristic parameters: uniform light-gray regions (skeleton screens).
    double max_gray_stddev = 6.0;
    double min_region_area_fraction = 0.005;
    double gray_band_lo = 180.0;
    double gray_band_hi = 245.0;

    void validate() const;
};

/// Finds maximal connected regions whose luma lies in the gray band with
/// per-region stddev <= max_gray_stddev and area >= the configured fraction
/// of the frame. confidence = 1 - stddev / max_gray_stddev.
std::vector<PlaceholderRegion> detect_heuristic(const GrayImage& frame, const DetectorSpec& spec);

/// Long-lived external detector child process. Requests are serialized;
/// callers may invoke detect() from multiple threads.
///
/// Wire protocol (line-delimited JSON over stdin/stdout):
///   request:  {"frame": "<absolute image path>", "id": <int>}
///   response: {"id": <int>, "boxes": [{"x":..,"y":..,"w":..,"h":..,"conf":..}, ...]}
class ExternalDetector {
public:
    explicit ExternalDetector(DetectorSpec spec);
    ~ExternalDetector();

    ExternalDetector(const ExternalDetector&) = delete;
    ExternalDetector& operator=(const ExternalDetector&) = delete;

    /// Boxes with conf >= confidence_floor, clamped to frame bounds when
    /// dimensions are given (frame_w/frame_h > 0).
    std::vector<PlaceholderRegion> detect(const std::string& frame_path, int frame_w = 0,
                                          int frame_h = 0);

private:
    void spawn();
    std::string read_response_line();

    DetectorSpec spec_;
    int child_stdin_ = -1;
    int child_stdout_ = -1;
    long pid_ = -1;
    int next_id_ = 0;
    bool got_any_response_ = false;
    std::string buffer_;
    std::mutex mutex_;
};

/// One-shot convenience wrapper spawning a detector for a single frame.
std::vector<PlaceholderRegion> detect_external(const std::string& frame_path,
                                               const DetectorSpec& spec, int frame_w = 0,
                                               int frame_h = 0);

/// Exact union area of integer boxes (overlaps counted once).
long long union_area(std::span<const PlaceholderRegion> regions);

struct PlaceholderCheck {
    bool present = false;
    double area_fraction = 0.0;
};

/// present iff union-area / frame_area >= min_area_fraction (inclusive).
PlaceholderCheck has_placeholder(std::span<const PlaceholderRegion> regions, double frame_area_px,
                                 double min_area_fraction);

} // namespace lagscan
