#include "lagscan/classify.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <memory>

#include <unistd.h>

#include "lagscan/image_io.hpp"
#include "parallel.hpp"

namespace lagscan {

namespace {

std::string format_ms(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return buf;
}

std::string format_pct(double fraction) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
    return buf;
}

} // namespace

JankyScan detect_janky(const Screencast& cast, const DetectionConfig& cfg) {
    cfg.validate();
    JankyScan scan;
    const auto& frames = cast.frames();
    for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
        const double gap = frames[i + 1].pts_ms - frames[i].pts_ms;
        if (gap > cfg.frame_budget_ms) {
            LagInterval lag;
            lag.type = LagType::janky;
            lag.f_start = i;
            lag.f_end = i + 1;
            lag.start_pts_ms = frames[i].pts_ms;
            lag.end_pts_ms = frames[i + 1].pts_ms;
            lag.duration_ms = gap;
            lag.evidence = "frame gap " + format_ms(gap) + " ms exceeds budget " +
                           format_ms(cfg.frame_budget_ms) + " ms";
            scan.candidates.push_back(lag);
            if (gap > cfg.jank_lag_ms)
                scan.lags.push_back(std::move(lag));
        }
    }
    return scan;
}

std::optional<LagInterval> classify_static_run(const Screencast& cast, const StaticRun& run,
                                               const PlaceholderCheck& first_frame_placeholder,
                                               const DetectionConfig& cfg) {
    cfg.validate();
    LagInterval lag;
    lag.f_start = run.f_start;
    lag.f_end = run.f_end;
    lag.start_pts_ms = cast.frame(run.f_start).pts_ms;
    lag.end_pts_ms = cast.frame(run.f_end).pts_ms;
    lag.duration_ms = run.duration_ms;

    if (first_frame_placeholder.present) {
        if (run.duration_ms > cfg.load_lag_ms) {
            lag.type = LagType::loading;
            lag.evidence = "placeholder covers " +
                           format_pct(first_frame_placeholder.area_fraction) +
                           "% of the screen; content unchanged for " +
                           format_ms(run.duration_ms) + " ms";
            return lag;
        }
    } else if (run.duration_ms > cfg.frozen_lag_ms) {
        lag.type = LagType::frozen;
        lag.evidence =
            "no placeholder; screen unchanged for " + format_ms(run.duration_ms) + " ms";
        return lag;
    }
    return std::nullopt;
}

namespace {

// The external detector takes file paths; in-memory frames are staged to a
// temporary PNG.
struct StagedFramePath {
    std::string path;
    bool temporary = false;

    ~StagedFramePath() {
        if (temporary)
            std::remove(path.c_str());
    }
};

StagedFramePath frame_path_for_detector(const Frame& frame) {
    if (!frame.image.path.empty())
        return {std::filesystem::absolute(frame.image.path).string(), false};
    if (!frame.image.data)
        fail(Errc::missing_image, "frame " + std::to_string(frame.index) + " has no pixel data");
    const std::string path =
        (std::filesystem::temp_directory_path() /
         ("lagscan_frame_" + std::to_string(::getpid()) + "_" + std::to_string(frame.index) +
          ".png"))
            .string();
    save_png(*frame.image.data, path);
    return {path, true};
}

GrayImage full_res_gray(const Frame& frame) {
    if (frame.image.data)
        return to_grayscale(*frame.image.data);
    if (!frame.image.path.empty())
        return to_grayscale(load_image(frame.image.path));
    fail(Errc::missing_image, "frame " + std::to_string(frame.index) + " has no pixel data");
}

} // namespace

DetectionOutput detect_all(const Screencast& cast, const DetectionConfig& cfg,
                           const DetectorSpec& detector, TimelineMode mode,
                           const SsimParams& ssim_params, unsigned threads) {
    cfg.validate();
    detector.validate();
    ssim_params.validate();

    DetectionOutput out;
    out.analyzed = normalize_timeline(cast, mode);
    out.pair_scores = pairwise_scores(out.analyzed, ssim_params, threads);

    std::vector<double> pts;
    pts.reserve(out.analyzed.frame_count());
    for (const Frame& f : out.analyzed.frames())
        pts.push_back(f.pts_ms);
    out.static_runs = extract_static_runs(out.pair_scores, cfg.ssim_threshold, pts);

    std::unique_ptr<ExternalDetector> external;
    if (detector.kind == DetectorSpec::Kind::external)
        external = std::make_unique<ExternalDetector>(detector);

    const double frame_area =
        static_cast<double>(out.analyzed.width()) * out.analyzed.height();

    struct Classified {
        LagInterval lag;
        double area_fraction;
    };
    std::vector<Classified> run_lags;
    for (const StaticRun& run : out.static_runs) {
        const Frame& first = out.analyzed.frame(run.f_start);
        std::vector<PlaceholderRegion> regions;
        if (external) {
            const StagedFramePath staged = frame_path_for_detector(first);
            regions = external->detect(staged.path, out.analyzed.width(), out.analyzed.height());
        } else {
            regions = detect_heuristic(full_res_gray(first), detector);
        }
        const PlaceholderCheck check =
            has_placeholder(regions, frame_area, cfg.min_placeholder_area_fraction);
        if (auto lag = classify_static_run(out.analyzed, run, check, cfg))
            run_lags.push_back({std::move(*lag), check.area_fraction});
    }

    JankyScan janky = detect_janky(out.analyzed, cfg);
    out.jank_candidates = std::move(janky.candidates);

    for (LagInterval& lag : janky.lags) {
        out.lags.push_back(std::move(lag));
        out.area_fractions.push_back(1.0);
    }
    for (Classified& c : run_lags) {
        const double fraction = c.lag.type == LagType::loading ? c.area_fraction : 1.0;
        out.lags.push_back(std::move(c.lag));
        out.area_fractions.push_back(fraction);
    }

    std::vector<std::size_t> order(out.lags.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (out.lags[a].f_start != out.lags[b].f_start)
            return out.lags[a].f_start < out.lags[b].f_start;
        return static_cast<int>(out.lags[a].type) < static_cast<int>(out.lags[b].type);
    });
    std::vector<LagInterval> sorted_lags;
    std::vector<double> sorted_fractions;
    sorted_lags.reserve(out.lags.size());
    sorted_fractions.reserve(out.lags.size());
    for (const std::size_t i : order) {
        sorted_lags.push_back(std::move(out.lags[i]));
        sorted_fractions.push_back(out.area_fractions[i]);
    }
    out.lags = std::move(sorted_lags);
    out.area_fractions = std::move(sorted_fractions);
    return out;
}

std::vector<LagInterval> mark_severity(std::vector<LagInterval> lags, const SeverityConfig& sev) {
    for (LagInterval& lag : lags) {
        switch (lag.type) {
        case LagType::janky: lag.severe = lag.duration_ms > sev.t_janky_ms; break;
        case LagType::loading: lag.severe = lag.duration_ms > sev.t_load_ms; break;
        case LagType::frozen: lag.severe = lag.duration_ms > sev.t_frozen_ms; break;
        }
    }
    return lags;
}

} // namespace lagscan
