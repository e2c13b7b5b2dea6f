#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lagscan/classify.hpp"
#include "lagscan/model.hpp"

namespace lagscan {

struct Annotation {
    LagType type = LagType::janky;
    std::size_t f_start = 0;
    std::size_t f_end = 0;

    bool operator==(const Annotation&) const = default;
};

/// Expert- or generator-provided lag annotations for one screencast.
struct GroundTruth {
    std::vector<Annotation> annotations;
};

/// File format: JSON array of {"type": "...", "f_start": int, "f_end": int}.
GroundTruth load_ground_truth(const std::string& path);
void write_ground_truth(const GroundTruth& truth, const std::string& path);

/// A detection is a true positive iff some annotation has the same type
/// and identical start/end indices; each annotation matches at most one
/// detection.
struct MatchResult {
    std::vector<LagInterval> tp;
    std::vector<LagInterval> fp;
    std::vector<Annotation> fn;
};

MatchResult match_lags(std::span<const LagInterval> detected, const GroundTruth& truth);

/// Precision/recall/F1 with explicit undefined markers for zero
/// denominators (never NaN).
struct MetricsRow {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

MetricsRow metrics(long long tp, long long fp, long long fn);

/// Per-type rows plus the cross-type average (counts summed, scores
/// macro-averaged over the types where they are defined).
struct EvalTable {
    MetricsRow janky;
    MetricsRow loading;
    MetricsRow frozen;
    MetricsRow overall;
};

struct EvalCase {
    Screencast cast;
    GroundTruth truth;
};

/// Runs detection on every cast and aggregates match counts per type.
EvalTable evaluate(std::span<const EvalCase> corpus, const DetectionConfig& cfg,
                   const DetectorSpec& detector,
                   TimelineMode mode = TimelineMode::variable_rate,
                   const SsimParams& ssim_params = {}, unsigned threads = 0);

/// Plain-text table: janky / loading / frozen / average rows.
std::string render_table(const EvalTable& table);
nlohmann::ordered_json table_to_json(const EvalTable& table);

} // namespace lagscan
