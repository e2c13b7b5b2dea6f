#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lagscan/model.hpp"

namespace lagscan {

/// On-disk frame listing. Text format, UTF-8:
///   width=<int>
///   height=<int>
///   source=<string>
///   "<relative image path>",<pts_ms decimal>   (one line per frame)
struct FrameManifest {
    struct Entry {
        std::string image_path; // relative to the manifest's directory
        double pts_ms = 0.0;
    };

    std::vector<Entry> entries;
    int width = 0;
    int height = 0;
    std::string source_id;
};

enum class TimelineMode {
    variable_rate, // frame captured only on render
    constant_rate, // fixed-FPS recording with repeated frames
};

const char* to_string(TimelineMode mode) noexcept;
TimelineMode timeline_mode_from_string(std::string_view name);

/// Parses the manifest file without touching the referenced images.
FrameManifest parse_manifest(const std::string& path);

/// Writes `manifest` to `path`. PTS values round-trip exactly.
void write_manifest(const FrameManifest& manifest, const std::string& path);

/// Loads and validates a screencast: every referenced image must decode to
/// the declared dimensions. Pixels are validated then dropped; analysis
/// re-reads frames on demand. keep_pixels retains the decoded buffers.
Screencast load_manifest(const std::string& path, bool keep_pixels = false);

/// Builds a manifest describing `cast` with image paths written relative
/// to `manifest_path`'s directory.
FrameManifest manifest_for(const Screencast& cast, const std::string& manifest_path);

/// Runs an external decoder and collects its output into a manifest.
/// The command template must contain {input} and {outdir} slots; the
/// decoder must emit frame_%06d images plus a timestamps.txt of one
/// pts_ms per line into {outdir}.
FrameManifest extract_frames(const std::string& video_path, const std::string& decoder_cmd,
                             const std::string& out_dir);

/// constant_rate: collapses maximal runs of byte-identical consecutive
/// frames to the run's first frame, so repeated content shows up as PTS
/// gaps. variable_rate: identity.
Screencast normalize_timeline(const Screencast& cast, TimelineMode mode);

} // namespace lagscan
