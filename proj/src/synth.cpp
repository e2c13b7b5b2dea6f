#include "lagscan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "lagscan/image_io.hpp"
#include "lagscan/ingest.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace lagscan {

const char* to_string(SyntheticEvent::Kind kind) noexcept {
    switch (kind) {
    case SyntheticEvent::Kind::jank_gap: return "jank_gap";
    case SyntheticEvent::Kind::loading_stall: return "loading_stall";
    case SyntheticEvent::Kind::freeze: return "freeze";
    case SyntheticEvent::Kind::scroll_motion: return "scroll_motion";
    }
    return "freeze";
}

SyntheticEvent::Kind synthetic_kind_from_string(std::string_view name) {
    if (name == "jank_gap") return SyntheticEvent::Kind::jank_gap;
    if (name == "loading_stall") return SyntheticEvent::Kind::loading_stall;
    if (name == "freeze") return SyntheticEvent::Kind::freeze;
    if (name == "scroll_motion") return SyntheticEvent::Kind::scroll_motion;
    fail(Errc::parse_error, "unknown synthetic event kind '" + std::string(name) + "'");
}

void SyntheticSpec::validate() const {
    if (width < 32 || height < 32)
        fail(Errc::spec_error, "frame size must be at least 32x32");
    if (!(fps > 0.0))
        fail(Errc::spec_error, "fps must be positive");
    const double frame_interval = 1000.0 / fps;
    if (duration_ms < 2.0 * frame_interval)
        fail(Errc::spec_error, "duration too short for two frames");
    if (noise_amplitude < 0 || noise_amplitude > 64)
        fail(Errc::spec_error, "noise_amplitude must lie in [0, 64]");
    if (pts_jitter_ms < 0.0)
        fail(Errc::spec_error, "pts_jitter_ms must be non-negative");
    if (pts_jitter_ms > 0.0 && pts_jitter_ms >= frame_interval / 4.0)
        fail(Errc::spec_error, "pts_jitter_ms must stay below a quarter frame interval");

    for (const SyntheticEvent& e : events) {
        if (!(e.duration_ms > 0.0))
            fail(Errc::spec_error, "event duration must be positive");
        if (e.start_ms < 0.0 || e.start_ms + e.duration_ms > duration_ms)
            fail(Errc::spec_error, "event [" + std::to_string(e.start_ms) + ", " +
                                       std::to_string(e.start_ms + e.duration_ms) +
                                       ") outside the screencast");
        if (e.kind == SyntheticEvent::Kind::jank_gap) {
            if (e.start_ms + e.duration_ms > duration_ms - frame_interval)
                fail(Errc::spec_error, "jank_gap needs a frame after it; end it at least one "
                                       "frame interval before the screencast ends");
            if (pts_jitter_ms > 0.0 && pts_jitter_ms >= e.duration_ms / 2.0)
                fail(Errc::spec_error, "pts_jitter_ms too large for jank_gap of " +
                                           std::to_string(e.duration_ms) + " ms");
        }
        if (e.kind == SyntheticEvent::Kind::loading_stall) {
            const auto& b = e.box;
            if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 || b.x + b.w > width ||
                b.y + b.h > height)
                fail(Errc::spec_error, "loading_stall box outside frame");
            if (noise_amplitude > 6)
                fail(Errc::spec_error,
                     "noise_amplitude above 6 would break placeholder uniformity");
        }
    }
    // Overlapping events would demand contradictory frame content.
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            const auto& a = events[i];
            const auto& b = events[j];
            if (a.start_ms < b.start_ms + b.duration_ms &&
                b.start_ms < a.start_ms + a.duration_ms)
                fail(Errc::spec_error, "events " + std::to_string(i) + " and " +
                                           std::to_string(j) + " overlap");
        }
}

namespace {

// splitmix64: deterministic across platforms, unlike <random> distributions.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(mix(a) ^ b) ^ c);
}

constexpr int kScrollStepPx = 4;
constexpr int kTextureLow = 40;
constexpr int kTextureSpan = 101; // luma in [40, 140], below the gray band
constexpr int kPlaceholderLuma = 220;

} // namespace

SyntheticResult generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    const double frame_interval = 1000.0 / spec.fps;

    std::vector<const SyntheticEvent*> gaps;
    std::vector<const SyntheticEvent*> holds; // freeze or loading_stall
    for (const SyntheticEvent& e : spec.events) {
        if (e.kind == SyntheticEvent::Kind::jank_gap)
            gaps.push_back(&e);
        else if (e.kind != SyntheticEvent::Kind::scroll_motion)
            holds.push_back(&e);
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const auto* a, const auto* b) { return a->start_ms < b->start_ms; });

    // Nominal frame times. Jank gaps snap to the grid: a frame lands
    // exactly on the gap start, the next one exactly gap-duration later.
    std::vector<double> times;
    {
        std::size_t gap_idx = 0;
        double t = 0.0;
        while (t < spec.duration_ms - 1e-9) {
            times.push_back(t);
            if (gap_idx < gaps.size()) {
                const double gs = gaps[gap_idx]->start_ms;
                if (t + frame_interval / 2.0 >= gs) {
                    // This frame opens the gap; jump across it.
                    t = t + gaps[gap_idx]->duration_ms;
                    ++gap_idx;
                    continue;
                }
                if (t + frame_interval > gs && t + frame_interval / 2.0 < gs) {
                    t = gs;
                    continue;
                }
            }
            t += frame_interval;
        }
    }
    if (times.size() < 2)
        fail(Errc::spec_error, "spec produces fewer than 2 frames");

    // Jittered PTS (frame 0 stays at its nominal time).
    std::vector<double> pts(times.size());
    pts[0] = times[0];
    for (std::size_t i = 1; i < times.size(); ++i) {
        double jitter = 0.0;
        if (spec.pts_jitter_ms > 0.0) {
            const double u =
                static_cast<double>(hash3(spec.seed, 0x7074735fULL, i) >> 11) / 9007199254740992.0;
            jitter = (2.0 * u - 1.0) * spec.pts_jitter_ms;
        }
        pts[i] = times[i] + jitter;
    }

    // Content state per frame: scroll offset advances once when entering a
    // hold window (so the locked frame differs from its predecessor) and on
    // every free-running frame.
    struct FrameState {
        int offset = 0;
        const SyntheticEvent* hold = nullptr;
    };
    std::vector<FrameState> states(times.size());
    {
        int offset = 0;
        const SyntheticEvent* current = nullptr;
        int held_offset = 0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double t = times[i];
            const SyntheticEvent* hold = nullptr;
            for (const SyntheticEvent* e : holds)
                if (t >= e->start_ms && t < e->start_ms + e->duration_ms) {
                    hold = e;
                    break;
                }
            if (hold) {
                if (hold != current) {
                    offset += kScrollStepPx;
                    held_offset = offset;
                    current = hold;
                }
                states[i] = {held_offset, hold};
            } else {
                current = nullptr;
                offset += kScrollStepPx;
                states[i] = {offset, nullptr};
            }
        }
    }

    // Render.
    std::vector<std::pair<double, ImageRef>> frames;
    frames.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        ImageU8 img;
        img.width = spec.width;
        img.height = spec.height;
        img.channels = 1;
        img.pixels.resize(static_cast<std::size_t>(spec.width) * spec.height);
        const FrameState& st = states[i];
        const bool stall = st.hold && st.hold->kind == SyntheticEvent::Kind::loading_stall;
        for (int y = 0; y < spec.height; ++y) {
            std::uint8_t* row = img.pixels.data() + static_cast<std::size_t>(y) * spec.width;
            for (int x = 0; x < spec.width; ++x) {
                int luma;
                if (stall && x >= st.hold->box.x && x < st.hold->box.x + st.hold->box.w &&
                    y >= st.hold->box.y && y < st.hold->box.y + st.hold->box.h) {
                    luma = kPlaceholderLuma;
                } else {
                    luma = kTextureLow +
                           static_cast<int>(
                               hash3(spec.seed, static_cast<std::uint64_t>(x),
                                     static_cast<std::uint64_t>(y + st.offset)) %
                               kTextureSpan);
                }
                if (spec.noise_amplitude > 0) {
                    const int span = 2 * spec.noise_amplitude + 1;
                    luma += static_cast<int>(hash3(spec.seed ^ 0x6e6f697365ULL,
                                                   static_cast<std::uint64_t>(y) * spec.width + x,
                                                   i) %
                                             static_cast<std::uint64_t>(span)) -
                            spec.noise_amplitude;
                }
                row[x] = static_cast<std::uint8_t>(std::clamp(luma, 0, 255));
            }
        }
        ImageRef ref;
        ref.data = std::make_shared<const ImageU8>(std::move(img));
        frames.emplace_back(pts[i], std::move(ref));
    }

    SyntheticResult result;
    result.cast = Screencast::make(
        std::move(frames), spec.width, spec.height,
        spec.source_id.empty() ? "synthetic_" + std::to_string(spec.seed) : spec.source_id);

    // Ground truth, derived from the emitted frames under the default
    // detection thresholds. A stall whose box covers less screen area than
    // the placeholder rule requires classifies as frozen, exactly like the
    // detector would see it.
    const DetectionConfig defaults;
    const double frame_area = static_cast<double>(spec.width) * spec.height;
    for (const SyntheticEvent* e : holds) {
        std::size_t first = times.size(), last = 0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (states[i].hold == e) {
                first = std::min(first, i);
                last = std::max(last, i);
            }
        if (first >= last)
            continue; // window covered fewer than 2 frames: no static pair
        const double duration = pts[last] - pts[first];
        bool placeholder = false;
        if (e->kind == SyntheticEvent::Kind::loading_stall) {
            const double fraction = static_cast<double>(e->box.w) * e->box.h / frame_area;
            placeholder = fraction >= defaults.min_placeholder_area_fraction;
        }
        if (placeholder && duration > defaults.load_lag_ms)
            result.truth.annotations.push_back(Annotation{LagType::loading, first, last});
        else if (!placeholder && duration > defaults.frozen_lag_ms)
            result.truth.annotations.push_back(Annotation{LagType::frozen, first, last});
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double gap = pts[i + 1] - pts[i];
        if (gap > defaults.jank_lag_ms)
            result.truth.annotations.push_back(Annotation{LagType::janky, i, i + 1});
    }
    std::sort(result.truth.annotations.begin(), result.truth.annotations.end(),
              [](const Annotation& a, const Annotation& b) {
                  if (a.f_start != b.f_start)
                      return a.f_start < b.f_start;
                  return static_cast<int>(a.type) < static_cast<int>(b.type);
              });

    // Interaction trace: a scroll event opens every motion segment, plus
    // any explicit scroll_motion markers.
    std::vector<double> scroll_marks;
    bool in_motion = false;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const bool motion = states[i].hold == nullptr;
        if (motion && !in_motion)
            scroll_marks.push_back(pts[i]);
        in_motion = motion;
    }
    for (const SyntheticEvent& e : spec.events)
        if (e.kind == SyntheticEvent::Kind::scroll_motion)
            scroll_marks.push_back(e.start_ms);
    std::sort(scroll_marks.begin(), scroll_marks.end());
    scroll_marks.erase(std::unique(scroll_marks.begin(), scroll_marks.end()),
                       scroll_marks.end());
    for (const double mark : scroll_marks)
        result.trace.events.push_back(InteractionEvent{mark, InteractionEvent::Kind::scroll});

    return result;
}

SyntheticSpec synthetic_spec_from_json(const ordered_json& doc) {
    try {
        SyntheticSpec spec;
        if (doc.contains("width")) spec.width = doc["width"].get<int>();
        if (doc.contains("height")) spec.height = doc["height"].get<int>();
        if (doc.contains("fps")) spec.fps = doc["fps"].get<double>();
        if (doc.contains("duration_ms")) spec.duration_ms = doc["duration_ms"].get<double>();
        if (doc.contains("noise_amplitude"))
            spec.noise_amplitude = doc["noise_amplitude"].get<int>();
        if (doc.contains("pts_jitter_ms"))
            spec.pts_jitter_ms = doc["pts_jitter_ms"].get<double>();
        if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("source_id")) spec.source_id = doc["source_id"].get<std::string>();
        if (doc.contains("events")) {
            for (const auto& item : doc["events"]) {
                SyntheticEvent e;
                e.kind = synthetic_kind_from_string(item.at("kind").get<std::string>());
                e.start_ms = item.at("start_ms").get<double>();
                e.duration_ms = item.at("duration_ms").get<double>();
                if (item.contains("box")) {
                    const auto& b = item["box"];
                    e.box = SyntheticEvent::Box{b.at("x").get<int>(), b.at("y").get<int>(),
                                                b.at("w").get<int>(), b.at("h").get<int>()};
                }
                spec.events.push_back(e);
            }
        }
        return spec;
    } catch (const ordered_json::exception& e) {
        fail(Errc::parse_error, std::string("bad synthetic spec: ") + e.what());
    }
}

ordered_json synthetic_spec_to_json(const SyntheticSpec& spec) {
    ordered_json events = ordered_json::array();
    for (const SyntheticEvent& e : spec.events) {
        ordered_json item{{"kind", to_string(e.kind)},
                          {"start_ms", e.start_ms},
                          {"duration_ms", e.duration_ms}};
        if (e.kind == SyntheticEvent::Kind::loading_stall)
            item["box"] =
                ordered_json{{"x", e.box.x}, {"y", e.box.y}, {"w", e.box.w}, {"h", e.box.h}};
        events.push_back(std::move(item));
    }
    return ordered_json{{"width", spec.width},
                        {"height", spec.height},
                        {"fps", spec.fps},
                        {"duration_ms", spec.duration_ms},
                        {"seed", spec.seed},
                        {"noise_amplitude", spec.noise_amplitude},
                        {"pts_jitter_ms", spec.pts_jitter_ms},
                        {"source_id", spec.source_id},
                        {"events", std::move(events)}};
}

std::string write_synthetic_case(const SyntheticResult& result, const std::string& out_dir) {
    const fs::path base(out_dir);
    fs::create_directories(base / "frames");

    FrameManifest manifest;
    manifest.width = result.cast.width();
    manifest.height = result.cast.height();
    manifest.source_id = result.cast.source_id();
    for (const Frame& frame : result.cast.frames()) {
        char name[64];
        std::snprintf(name, sizeof(name), "frames/frame_%06zu.png", frame.index);
        save_png(*frame.image.data, (base / name).string());
        manifest.entries.push_back(FrameManifest::Entry{name, frame.pts_ms});
    }
    const std::string manifest_path = (base / "manifest.txt").string();
    write_manifest(manifest, manifest_path);
    write_ground_truth(result.truth, (base / "truth.json").string());
    write_trace(result.trace, (base / "trace.txt").string());
    return manifest_path;
}

} // namespace lagscan
