#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lagscan/eval.hpp"
#include "lagscan/model.hpp"
#include "lagscan/prioritize.hpp"

namespace lagscan {

/// A synthetic screencast scrolls a deterministic high-frequency texture
/// and injects lag events. Ground truth is derived from the frames
/// actually emitted, so annotations are exactly what the detection rules
/// should report under the default configuration.
struct SyntheticEvent {
    enum class Kind { jank_gap, loading_stall, freeze, scroll_motion };

    struct Box {
        int x = 0;
        int y = 0;
        int w = 0;
        int h = 0;
    };

    Kind kind = Kind::freeze;
    double start_ms = 0.0;
    double duration_ms = 0.0;
    Box box; // loading_stall only: the placeholder rectangle
};

const char* to_string(SyntheticEvent::Kind kind) noexcept;
SyntheticEvent::Kind synthetic_kind_from_string(std::string_view name);

struct SyntheticSpec {
    int width = 180;
    int height = 320;
    double fps = 60.0;
    double duration_ms = 4000.0;
    std::vector<SyntheticEvent> events;
    /// Per-pixel luma jitter in [-amp, amp] (0 disables).
    int noise_amplitude = 0;
    /// Per-frame PTS jitter in [-j, j] ms (frame 0 is never jittered).
    double pts_jitter_ms = 0.0;
    std::uint64_t seed = 0;
    std::string source_id; // defaults to "synthetic_<seed>"

    void validate() const; // throws SpecError
};

SyntheticSpec synthetic_spec_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json synthetic_spec_to_json(const SyntheticSpec& spec);

struct SyntheticResult {
    Screencast cast; // frames held in memory
    GroundTruth truth;
    InteractionTrace trace;
};

SyntheticResult generate_synthetic(const SyntheticSpec& spec);

/// Writes frames/, manifest.txt, truth.json and trace.txt under out_dir.
/// Returns the manifest path.
std::string write_synthetic_case(const SyntheticResult& result, const std::string& out_dir);

} // namespace lagscan
