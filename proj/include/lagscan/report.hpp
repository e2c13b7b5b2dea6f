#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lagscan/classify.hpp"
#include "lagscan/ingest.hpp"
#include "lagscan/model.hpp"
#include "lagscan/prioritize.hpp"
#include "lagscan/similarity.hpp"

namespace lagscan {

enum class GatePolicy { never_fail, fail_on_severe, fail_on_any };

const char* to_string(GatePolicy policy) noexcept;
GatePolicy gate_policy_from_string(std::string_view name);

/// Configuration snapshot echoed into every report.
struct ConfigEcho {
    DetectionConfig detection;
    SeverityConfig severity;
    SsimParams ssim;
    std::string detector_kind = "heuristic";
    RankWeights weights;
    TimelineMode timeline = TimelineMode::variable_rate;

    bool operator==(const ConfigEcho&) const = default;
};

struct ReportEntry {
    LagType type = LagType::janky;
    int rank = 0;
    bool severe = false;
    std::size_t f_start = 0;
    std::size_t f_end = 0;
    double start_pts_ms = 0.0;
    double end_pts_ms = 0.0;
    double duration_ms = 0.0;
    double score = 0.0;
    FactorBreakdown factors;
    /// How many lags of this type the analysis found.
    int frequency = 0;
    /// Kind of the adjacent interaction event, empty when none.
    std::string interaction;
    double area_fraction = 1.0;
    std::string evidence;
    /// Frame image references: up to 8 evenly sampled across the interval.
    std::vector<std::string> frames;

    bool operator==(const ReportEntry&) const = default;
};

struct AnalysisReport {
    std::string source_id;
    std::string tool_version;
    ConfigEcho config;
    /// Entries in rank order: ranked severe lags first, then the
    /// remaining lags by frame position.
    std::vector<ReportEntry> lags;
    /// Opaque system-metrics attachment (pass-through).
    std::optional<nlohmann::ordered_json> metrics;

    bool operator==(const AnalysisReport&) const = default;
};

/// Evenly samples up to max_count indices in [f_start, f_end], endpoints
/// always included.
std::vector<std::size_t> sample_frame_indices(std::size_t f_start, std::size_t f_end,
                                              std::size_t max_count = 8);

/// Assembles the report from detection + ranking output. `trace` supplies
/// the interaction context column; pass nullopt when none was recorded.
AnalysisReport make_report(const DetectionOutput& detection,
                           const std::vector<LagInterval>& lags_with_severity,
                           const std::vector<RankedLag>& ranked_severe,
                           const ConfigEcho& config,
                           const std::optional<InteractionTrace>& trace,
                           std::optional<nlohmann::ordered_json> metrics = std::nullopt);

nlohmann::ordered_json report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::ordered_json& doc);

/// Writes the canonical JSON document; load_report reads it back exactly.
void emit_json(const AnalysisReport& report, const std::string& path);
AnalysisReport load_report(const std::string& path);

/// Writes a self-contained page (thumbnails inlined as data URIs) to
/// out_dir/report.html. Frame pixels come from `cast`.
void emit_html(const AnalysisReport& report, const Screencast& cast, const std::string& out_dir);

/// 0 pass, 2 gate failure. (1 is reserved for tool errors.)
int exit_code(const AnalysisReport& report, GatePolicy policy);

} // namespace lagscan
