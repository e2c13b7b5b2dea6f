#pragma once

#include <optional>
#include <vector>

#include "lagscan/ingest.hpp"
#include "lagscan/model.hpp"
#include "lagscan/placeholder.hpp"
#include "lagscan/segmentation.hpp"
#include "lagscan/similarity.hpp"

namespace lagscan {

/// Result of the per-pair gap scan. Gaps above the frame budget are jank
/// candidates; gaps above jank_lag_ms are also janky lags (and appear in
/// both lists).
struct JankyScan {
    std::vector<LagInterval> candidates;
    std::vector<LagInterval> lags;
};

JankyScan detect_janky(const Screencast& cast, const DetectionConfig& cfg);

/// placeholder present and duration > load_lag_ms -> loading lag;
/// placeholder absent and duration > frozen_lag_ms -> frozen lag;
/// otherwise nothing.
std::optional<LagInterval> classify_static_run(const Screencast& cast, const StaticRun& run,
                                               const PlaceholderCheck& first_frame_placeholder,
                                               const DetectionConfig& cfg);

struct DetectionOutput {
    /// The screencast the indices below refer to (input after timeline
    /// normalization).
    Screencast analyzed;
    /// Detected lags sorted by f_start, then janky < loading < frozen.
    std::vector<LagInterval> lags;
    /// Affected-area fraction per lag (placeholder coverage for loading
    /// lags, 1.0 for janky/frozen which affect the whole screen).
    std::vector<double> area_fractions;
    std::vector<LagInterval> jank_candidates;
    std::vector<StaticRun> static_runs;
    std::vector<PairScore> pair_scores;
};

/// Full detection pipeline: normalize -> pairwise SSIM -> static runs ->
/// placeholder check on each run's first frame -> run classification,
/// plus the gap scan over the whole timeline.
DetectionOutput detect_all(const Screencast& cast, const DetectionConfig& cfg,
                           const DetectorSpec& detector,
                           TimelineMode mode = TimelineMode::variable_rate,
                           const SsimParams& ssim_params = {}, unsigned threads = 0);

/// Sets the severe flag (duration strictly above the type's threshold);
/// intervals and order are preserved.
std::vector<LagInterval> mark_severity(std::vector<LagInterval> lags, const SeverityConfig& sev);

} // namespace lagscan
