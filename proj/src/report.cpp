#include "lagscan/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lagscan/image_io.hpp"
#include "lagscan/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace lagscan {

const char* to_string(GatePolicy policy) noexcept {
    switch (policy) {
    case GatePolicy::never_fail: return "never-fail";
    case GatePolicy::fail_on_severe: return "fail-on-severe";
    case GatePolicy::fail_on_any: return "fail-on-any";
    }
    return "never-fail";
}

GatePolicy gate_policy_from_string(std::string_view name) {
    if (name == "never-fail" || name == "never_fail") return GatePolicy::never_fail;
    if (name == "fail-on-severe" || name == "fail_on_severe") return GatePolicy::fail_on_severe;
    if (name == "fail-on-any" || name == "fail_on_any") return GatePolicy::fail_on_any;
    fail(Errc::parse_error, "unknown gate policy '" + std::string(name) + "'");
}

std::vector<std::size_t> sample_frame_indices(std::size_t f_start, std::size_t f_end,
                                              std::size_t max_count) {
    std::vector<std::size_t> indices;
    const std::size_t span = f_end - f_start;
    if (max_count == 0)
        return indices;
    if (span + 1 <= max_count) {
        for (std::size_t i = f_start; i <= f_end; ++i)
            indices.push_back(i);
        return indices;
    }
    for (std::size_t k = 0; k < max_count; ++k) {
        const std::size_t offset =
            (span * k + (max_count - 1) / 2) / (max_count - 1); // rounded interpolation
        indices.push_back(f_start + offset);
    }
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

AnalysisReport make_report(const DetectionOutput& detection,
                           const std::vector<LagInterval>& lags_with_severity,
                           const std::vector<RankedLag>& ranked_severe,
                           const ConfigEcho& config,
                           const std::optional<InteractionTrace>& trace,
                           std::optional<ordered_json> metrics) {
    AnalysisReport report;
    report.source_id = detection.analyzed.source_id();
    report.tool_version = kToolVersion;
    report.config = config;
    report.metrics = std::move(metrics);

    int type_counts[3] = {0, 0, 0};
    for (const LagInterval& lag : lags_with_severity)
        ++type_counts[static_cast<int>(lag.type)];

    auto entry_for = [&](const LagInterval& lag, double area_fraction, int rank, double score,
                         const FactorBreakdown& factors) {
        ReportEntry entry;
        entry.type = lag.type;
        entry.rank = rank;
        entry.severe = lag.severe;
        entry.f_start = lag.f_start;
        entry.f_end = lag.f_end;
        entry.start_pts_ms = lag.start_pts_ms;
        entry.end_pts_ms = lag.end_pts_ms;
        entry.duration_ms = lag.duration_ms;
        entry.score = score;
        entry.factors = factors;
        entry.frequency = type_counts[static_cast<int>(lag.type)];
        if (trace) {
            if (const auto event = adjacent_event(lag, *trace))
                entry.interaction = to_string(event->kind);
        }
        entry.area_fraction = area_fraction;
        entry.evidence = lag.evidence;
        for (const std::size_t idx : sample_frame_indices(lag.f_start, lag.f_end)) {
            const std::string& path = detection.analyzed.frame(idx).image.path;
            if (!path.empty())
                entry.frames.push_back(path);
        }
        return entry;
    };

    for (const RankedLag& ranked : ranked_severe)
        report.lags.push_back(entry_for(ranked.lag, ranked.area_fraction, ranked.rank,
                                        ranked.score, ranked.factors));

    // Remaining (non-severe) lags follow the ranked ones, by frame position.
    int next_rank = static_cast<int>(ranked_severe.size()) + 1;
    for (std::size_t i = 0; i < lags_with_severity.size(); ++i) {
        const LagInterval& lag = lags_with_severity[i];
        if (lag.severe)
            continue;
        const double fraction =
            i < detection.area_fractions.size() ? detection.area_fractions[i] : 1.0;
        report.lags.push_back(entry_for(lag, fraction, next_rank++, 0.0, FactorBreakdown{}));
    }
    return report;
}

namespace {

ordered_json factors_to_json(const FactorBreakdown& f) {
    return ordered_json{{"frequency", f.frequency},
                        {"duration", f.duration},
                        {"interaction", f.interaction},
                        {"visual", f.visual}};
}

FactorBreakdown factors_from_json(const ordered_json& doc) {
    FactorBreakdown f;
    f.frequency = doc.at("frequency").get<double>();
    f.duration = doc.at("duration").get<double>();
    f.interaction = doc.at("interaction").get<double>();
    f.visual = doc.at("visual").get<double>();
    return f;
}

} // namespace

ordered_json report_to_json(const AnalysisReport& report) {
    ordered_json config;
    const DetectionConfig& d = report.config.detection;
    config["detection"] = ordered_json{
        {"frame_budget_ms", d.frame_budget_ms},
        {"jank_lag_ms", d.jank_lag_ms},
        {"frozen_lag_ms", d.frozen_lag_ms},
        {"load_lag_ms", d.load_lag_ms},
        {"ssim_threshold", d.ssim_threshold},
        {"min_placeholder_area_fraction", d.min_placeholder_area_fraction},
    };
    const SeverityConfig& s = report.config.severity;
    config["severity"] = ordered_json{
        {"t_janky_ms", s.t_janky_ms},
        {"t_load_ms", s.t_load_ms},
        {"t_frozen_ms", s.t_frozen_ms},
    };
    const SsimParams& p = report.config.ssim;
    config["ssim"] = ordered_json{
        {"window_size", p.window_size},
        {"gaussian_sigma", p.gaussian_sigma},
        {"k1", p.k1},
        {"k2", p.k2},
        {"dynamic_range", p.dynamic_range},
        {"downscale_max_dim",
         p.downscale_max_dim ? ordered_json(*p.downscale_max_dim) : ordered_json(nullptr)},
    };
    config["detector"] = report.config.detector_kind;
    const RankWeights& w = report.config.weights;
    config["weights"] = ordered_json{
        {"frequency", w.frequency},
        {"duration", w.duration},
        {"interaction", w.interaction},
        {"visual", w.visual},
    };
    config["timeline"] = to_string(report.config.timeline);

    ordered_json lags = ordered_json::array();
    for (const ReportEntry& entry : report.lags) {
        ordered_json lag{
            {"type", to_string(entry.type)},
            {"rank", entry.rank},
            {"severe", entry.severe},
            {"f_start", entry.f_start},
            {"f_end", entry.f_end},
            {"start_pts_ms", entry.start_pts_ms},
            {"end_pts_ms", entry.end_pts_ms},
            {"duration_ms", entry.duration_ms},
            {"score", entry.score},
            {"factors", factors_to_json(entry.factors)},
            {"frequency", entry.frequency},
            {"interaction", entry.interaction},
            {"area_fraction", entry.area_fraction},
            {"evidence", entry.evidence},
            {"frames", entry.frames},
        };
        lags.push_back(std::move(lag));
    }

    ordered_json doc{
        {"source", report.source_id},
        {"tool_version", report.tool_version},
        {"config", std::move(config)},
        {"lags", std::move(lags)},
    };
    if (report.metrics)
        doc["metrics"] = *report.metrics;
    return doc;
}

AnalysisReport report_from_json(const ordered_json& doc) {
    try {
        AnalysisReport report;
        report.source_id = doc.at("source").get<std::string>();
        report.tool_version = doc.at("tool_version").get<std::string>();

        const auto& config = doc.at("config");
        const auto& d = config.at("detection");
        report.config.detection.frame_budget_ms = d.at("frame_budget_ms").get<double>();
        report.config.detection.jank_lag_ms = d.at("jank_lag_ms").get<double>();
        report.config.detection.frozen_lag_ms = d.at("frozen_lag_ms").get<double>();
        report.config.detection.load_lag_ms = d.at("load_lag_ms").get<double>();
        report.config.detection.ssim_threshold = d.at("ssim_threshold").get<double>();
        report.config.detection.min_placeholder_area_fraction =
            d.at("min_placeholder_area_fraction").get<double>();
        const auto& s = config.at("severity");
        report.config.severity.t_janky_ms = s.at("t_janky_ms").get<double>();
        report.config.severity.t_load_ms = s.at("t_load_ms").get<double>();
        report.config.severity.t_frozen_ms = s.at("t_frozen_ms").get<double>();
        const auto& p = config.at("ssim");
        report.config.ssim.window_size = p.at("window_size").get<int>();
        report.config.ssim.gaussian_sigma = p.at("gaussian_sigma").get<double>();
        report.config.ssim.k1 = p.at("k1").get<double>();
        report.config.ssim.k2 = p.at("k2").get<double>();
        report.config.ssim.dynamic_range = p.at("dynamic_range").get<double>();
        if (p.at("downscale_max_dim").is_null())
            report.config.ssim.downscale_max_dim = std::nullopt;
        else
            report.config.ssim.downscale_max_dim = p.at("downscale_max_dim").get<int>();
        report.config.detector_kind = config.at("detector").get<std::string>();
        const auto& w = config.at("weights");
        report.config.weights.frequency = w.at("frequency").get<double>();
        report.config.weights.duration = w.at("duration").get<double>();
        report.config.weights.interaction = w.at("interaction").get<double>();
        report.config.weights.visual = w.at("visual").get<double>();
        report.config.timeline = timeline_mode_from_string(config.at("timeline").get<std::string>());

        for (const auto& lag : doc.at("lags")) {
            ReportEntry entry;
            entry.type = lag_type_from_string(lag.at("type").get<std::string>());
            entry.rank = lag.at("rank").get<int>();
            entry.severe = lag.at("severe").get<bool>();
            entry.f_start = lag.at("f_start").get<std::size_t>();
            entry.f_end = lag.at("f_end").get<std::size_t>();
            entry.start_pts_ms = lag.at("start_pts_ms").get<double>();
            entry.end_pts_ms = lag.at("end_pts_ms").get<double>();
            entry.duration_ms = lag.at("duration_ms").get<double>();
            entry.score = lag.at("score").get<double>();
            entry.factors = factors_from_json(lag.at("factors"));
            entry.frequency = lag.at("frequency").get<int>();
            entry.interaction = lag.at("interaction").get<std::string>();
            entry.area_fraction = lag.at("area_fraction").get<double>();
            entry.evidence = lag.at("evidence").get<std::string>();
            entry.frames = lag.at("frames").get<std::vector<std::string>>();
            report.lags.push_back(std::move(entry));
        }
        if (doc.contains("metrics"))
            report.metrics = doc.at("metrics");
        return report;
    } catch (const ordered_json::exception& e) {
        fail(Errc::parse_error, std::string("bad report document: ") + e.what());
    }
}

void emit_json(const AnalysisReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write report '" + path + "'");
    out << report_to_json(report).dump(2) << '\n';
    if (!out)
        fail(Errc::io_error, "write failed for report '" + path + "'");
}

AnalysisReport load_report(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::io_error, "cannot open report '" + path + "'");
    ordered_json doc = ordered_json::parse(in, nullptr, false);
    if (doc.is_discarded())
        fail(Errc::parse_error, "report '" + path + "' is not valid JSON");
    return report_from_json(doc);
}

// ---------------------------------------------------------------------------
// HTML emission
// ---------------------------------------------------------------------------

namespace {

std::string base64_encode(const std::vector<std::uint8_t>& data) {
    static constexpr char alphabet[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        const unsigned v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back(alphabet[v & 63]);
    }
    if (i + 1 == data.size()) {
        const unsigned v = data[i] << 16;
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.append("==");
    } else if (i + 2 == data.size()) {
        const unsigned v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(alphabet[(v >> 18) & 63]);
        out.push_back(alphabet[(v >> 12) & 63]);
        out.push_back(alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (const char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

ImageU8 frame_image(const Frame& frame) {
    if (frame.image.data)
        return *frame.image.data;
    if (!frame.image.path.empty()) {
        try {
            return load_image(frame.image.path);
        } catch (const Error&) {
            fail(Errc::missing_frame_image,
                 "frame image '" + frame.image.path + "' is not readable");
        }
    }
    fail(Errc::missing_frame_image,
         "frame " + std::to_string(frame.index) + " has no pixel data");
}

std::string thumbnail_data_uri(const Frame& frame, int max_dim) {
    const ImageU8 thumb = downscale_to_max_dim(frame_image(frame), max_dim);
    return "data:image/png;base64," + base64_encode(encode_png(thumb));
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace

void emit_html(const AnalysisReport& report, const Screencast& cast, const std::string& out_dir) {
    fs::create_directories(out_dir);
    constexpr int kThumbMaxDim = 270;

    std::ostringstream page;
    page << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
         << "<title>Lag report: " << html_escape(report.source_id) << "</title>\n"
         << "<style>\n"
         << "body{font-family:sans-serif;margin:2em;background:#fafafa;color:#222}\n"
         << "section.lag{border:1px solid #ccc;border-radius:6px;background:#fff;"
         << "margin:1.2em 0;padding:1em}\n"
         << ".badge{display:inline-block;padding:2px 8px;border-radius:4px;color:#fff;"
         << "font-size:0.85em;margin-left:0.5em}\n"
         << ".severe{background:#c0392b}.minor{background:#7f8c8d}\n"
         << ".strip img{margin:2px;border:1px solid #ddd;vertical-align:top}\n"
         << "table.meta td{padding:2px 10px 2px 0;font-size:0.95em}\n"
         << ".banner{padding:1em;background:#e8f5e9;border:1px solid #a5d6a7;"
         << "border-radius:6px}\n"
         << "</style>\n</head>\n<body>\n"
         << "<h1>GUI lag report</h1>\n"
         << "<p>Source: <b>" << html_escape(report.source_id) << "</b> &middot; tool version "
         << html_escape(report.tool_version) << " &middot; detector "
         << html_escape(report.config.detector_kind) << "</p>\n";

    if (report.lags.empty()) {
        page << "<p class=\"banner\">No lags detected.</p>\n";
    } else {
        for (const ReportEntry& entry : report.lags) {
            page << "<section class=\"lag\">\n"
                 << "<h2>#" << entry.rank << ' ' << to_string(entry.type)
                 << "<span class=\"badge " << (entry.severe ? "severe" : "minor") << "\">"
                 << (entry.severe ? "severe" : "minor") << "</span></h2>\n"
                 << "<table class=\"meta\">\n"
                 << "<tr><td>Frames</td><td>[" << entry.f_start << ", " << entry.f_end
                 << "]</td></tr>\n"
                 << "<tr><td>Start / end PTS</td><td>" << format_double(entry.start_pts_ms)
                 << " ms / " << format_double(entry.end_pts_ms) << " ms</td></tr>\n"
                 << "<tr><td>Duration</td><td>" << format_double(entry.duration_ms)
                 << " ms</td></tr>\n"
                 << "<tr><td>Score</td><td>" << format_double(entry.score) << "</td></tr>\n"
                 << "<tr><td>Type frequency</td><td>" << entry.frequency << "</td></tr>\n";
            if (!entry.interaction.empty())
                page << "<tr><td>Interaction</td><td>" << html_escape(entry.interaction)
                     << "</td></tr>\n";
            page << "<tr><td>Affected area</td><td>"
                 << format_double(entry.area_fraction * 100.0) << "%</td></tr>\n"
                 << "<tr><td>Evidence</td><td>" << html_escape(entry.evidence)
                 << "</td></tr>\n</table>\n"
                 << "<div class=\"strip\">\n";
            for (const std::size_t idx : sample_frame_indices(entry.f_start, entry.f_end)) {
                page << "<figure style=\"display:inline-block;margin:2px\"><img src=\""
                     << thumbnail_data_uri(cast.frame(idx), kThumbMaxDim) << "\" alt=\"frame "
                     << idx << "\"><figcaption style=\"font-size:0.8em;text-align:center\">f"
                     << idx << "</figcaption></figure>\n";
            }
            page << "</div>\n</section>\n";
        }
    }
    page << "</body>\n</html>\n";

    const fs::path out_path = fs::path(out_dir) / "report.html";
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write '" + out_path.string() + "'");
    out << page.str();
    if (!out)
        fail(Errc::io_error, "write failed for '" + out_path.string() + "'");
}

int exit_code(const AnalysisReport& report, GatePolicy policy) {
    switch (policy) {
    case GatePolicy::never_fail: return 0;
    case GatePolicy::fail_on_severe:
        for (const ReportEntry& entry : report.lags)
            if (entry.severe)
                return 2;
        return 0;
    case GatePolicy::fail_on_any: return report.lags.empty() ? 0 : 2;
    }
    return 0;
}

} // namespace lagscan
