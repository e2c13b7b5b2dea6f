#include "lagscan/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "lagscan/image_io.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace lagscan {

const char* to_string(TimelineMode mode) noexcept {
    return mode == TimelineMode::variable_rate ? "variable" : "constant";
}

TimelineMode timeline_mode_from_string(std::string_view name) {
    if (name == "variable" || name == "variable_rate")
        return TimelineMode::variable_rate;
    if (name == "constant" || name == "constant_rate")
        return TimelineMode::constant_rate;
    fail(Errc::parse_error, "unknown timeline mode '" + std::string(name) + "'");
}

namespace {

std::string format_pts(double pts) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), pts);
    if (ec != std::errc{})
        fail(Errc::io_error, "cannot format pts value");
    return std::string(buf, end);
}

double parse_pts(std::string_view text, const std::string& context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        fail(Errc::parse_error, "bad pts value '" + std::string(text) + "' " + context);
    return value;
}

int parse_header_int(const std::string& line, std::string_view key, const std::string& path) {
    if (!line.starts_with(key))
        fail(Errc::parse_error, "expected '" + std::string(key) + "<int>' in " + path +
                                    ", got '" + line + "'");
    int value = 0;
    const char* first = line.data() + key.size();
    const char* last = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value <= 0)
        fail(Errc::parse_error, "bad value in '" + line + "' in " + path);
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

} // namespace

FrameManifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(Errc::parse_error, "cannot open manifest '" + path + "'");

    FrameManifest manifest;
    std::string line;
    if (!std::getline(in, line))
        fail(Errc::parse_error, "manifest '" + path + "' is empty");
    manifest.width = parse_header_int(strip_cr(line), "width=", path);
    if (!std::getline(in, line))
        fail(Errc::parse_error, "manifest '" + path + "' truncated before height");
    manifest.height = parse_header_int(strip_cr(line), "height=", path);
    if (!std::getline(in, line))
        fail(Errc::parse_error, "manifest '" + path + "' truncated before source");
    line = strip_cr(line);
    if (!line.starts_with("source="))
        fail(Errc::parse_error, "expected 'source=<string>' in " + path + ", got '" + line + "'");
    manifest.source_id = line.substr(7);

    std::size_t line_no = 3;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty())
            continue;
        const std::string context = "at " + path + ":" + std::to_string(line_no);
        if (line.front() != '"')
            fail(Errc::parse_error, "frame line must start with a quoted path " + context);
        const auto close = line.find('"', 1);
        if (close == std::string::npos || close + 1 >= line.size() || line[close + 1] != ',')
            fail(Errc::parse_error, "malformed frame line " + context);
        FrameManifest::Entry entry;
        entry.image_path = line.substr(1, close - 1);
        entry.pts_ms = parse_pts(std::string_view(line).substr(close + 2), context);
        if (entry.image_path.empty())
            fail(Errc::parse_error, "empty image path " + context);
        manifest.entries.push_back(std::move(entry));
    }

    for (std::size_t i = 1; i < manifest.entries.size(); ++i) {
        if (manifest.entries[i].pts_ms - manifest.entries[i - 1].pts_ms <= kPtsToleranceMs)
            fail(Errc::non_monotonic_pts,
                 "pts not strictly increasing at entry " + std::to_string(i) + " of " + path);
    }
    return manifest;
}

void write_manifest(const FrameManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io_error, "cannot write manifest '" + path + "'");
    out << "width=" << manifest.width << "\n";
    out << "height=" << manifest.height << "\n";
    out << "source=" << manifest.source_id << "\n";
    for (const auto& entry : manifest.entries)
        out << '"' << entry.image_path << "\"," << format_pts(entry.pts_ms) << "\n";
    if (!out)
        fail(Errc::io_error, "write failed for manifest '" + path + "'");
}

Screencast load_manifest(const std::string& path, bool keep_pixels) {
    const FrameManifest manifest = parse_manifest(path);
    if (manifest.entries.size() < 2)
        fail(Errc::too_few_frames, "manifest '" + path + "' lists " +
                                       std::to_string(manifest.entries.size()) + " frames");

    const fs::path base = fs::path(path).parent_path();
    std::vector<std::pair<double, ImageRef>> frames(manifest.entries.size());
    detail::parallel_for(manifest.entries.size(), 0, [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        const std::string resolved = (base / entry.image_path).lexically_normal().string();
        ImageU8 image = load_image(resolved); // throws MissingImage
        if (image.width != manifest.width || image.height != manifest.height)
            fail(Errc::dimension_mismatch,
                 "'" + resolved + "' is " + std::to_string(image.width) + "x" +
                     std::to_string(image.height) + ", manifest declares " +
                     std::to_string(manifest.width) + "x" + std::to_string(manifest.height));
        ImageRef ref;
        ref.path = resolved;
        if (keep_pixels)
            ref.data = std::make_shared<const ImageU8>(std::move(image));
        frames[i] = {entry.pts_ms, std::move(ref)};
    });

    return Screencast::make(std::move(frames), manifest.width, manifest.height,
                            manifest.source_id);
}

FrameManifest manifest_for(const Screencast& cast, const std::string& manifest_path) {
    const fs::path base = fs::absolute(fs::path(manifest_path)).parent_path();
    FrameManifest manifest;
    manifest.width = cast.width();
    manifest.height = cast.height();
    manifest.source_id = cast.source_id();
    manifest.entries.reserve(cast.frame_count());
    for (const Frame& frame : cast.frames()) {
        if (frame.image.path.empty())
            fail(Errc::io_error, "frame " + std::to_string(frame.index) +
                                     " has no file path; write its image first");
        FrameManifest::Entry entry;
        entry.pts_ms = frame.pts_ms;
        entry.image_path =
            fs::absolute(fs::path(frame.image.path)).lexically_proximate(base).generic_string();
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

namespace {

// Runs `command` through /bin/sh, capturing stderr. Returns exit status.
int run_command(const std::string& command, std::string& stderr_out) {
    int err_pipe[2];
    if (pipe(err_pipe) != 0)
        fail(Errc::decoder_failed, std::string("pipe: ") + std::strerror(errno));
    const pid_t pid = fork();
    if (pid < 0) {
        close(err_pipe[0]);
        close(err_pipe[1]);
        fail(Errc::decoder_failed, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        dup2(err_pipe[1], STDERR_FILENO);
        close(err_pipe[0]);
        close(err_pipe[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(err_pipe[1]);
    std::string captured;
    char chunk[4096];
    for (;;) {
        const ssize_t n = read(err_pipe[0], chunk, sizeof(chunk));
        if (n <= 0)
            break;
        captured.append(chunk, static_cast<std::size_t>(n));
    }
    close(err_pipe[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    stderr_out = std::move(captured);
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    return -1;
}

std::string substitute_slot(std::string text, std::string_view slot, const std::string& value) {
    for (std::size_t pos = text.find(slot); pos != std::string::npos;
         pos = text.find(slot, pos + value.size()))
        text.replace(pos, slot.size(), value);
    return text;
}

} // namespace

FrameManifest extract_frames(const std::string& video_path, const std::string& decoder_cmd,
                             const std::string& out_dir) {
    if (decoder_cmd.find("{input}") == std::string::npos ||
        decoder_cmd.find("{outdir}") == std::string::npos)
        fail(Errc::bad_config, "decoder command template needs {input} and {outdir} slots");

    fs::create_directories(out_dir);
    std::string command = substitute_slot(decoder_cmd, "{input}", video_path);
    command = substitute_slot(command, "{outdir}", out_dir);

    std::string captured_stderr;
    const int status = run_command(command, captured_stderr);
    if (status != 0)
        fail(Errc::decoder_failed, "decoder exited with status " + std::to_string(status) +
                                       (captured_stderr.empty() ? "" : "; stderr: ") +
                                       captured_stderr);

    std::vector<fs::path> images;
    for (const auto& entry : fs::directory_iterator(out_dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string name = entry.path().filename().string();
        if (name.starts_with("frame_") && name != "timestamps.txt")
            images.push_back(entry.path());
    }
    if (images.empty())
        fail(Errc::no_frames_emitted, "decoder produced no frame_* images in " + out_dir);
    std::sort(images.begin(), images.end());

    std::vector<double> timestamps;
    {
        const fs::path ts_path = fs::path(out_dir) / "timestamps.txt";
        std::ifstream ts(ts_path);
        if (!ts)
            fail(Errc::decoder_failed, "decoder did not write " + ts_path.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(ts, line)) {
            ++line_no;
            line = strip_cr(line);
            if (line.empty())
                continue;
            timestamps.push_back(
                parse_pts(line, "at " + ts_path.string() + ":" + std::to_string(line_no)));
        }
    }
    if (timestamps.size() != images.size())
        fail(Errc::parse_error, "decoder emitted " + std::to_string(images.size()) +
                                    " frames but " + std::to_string(timestamps.size()) +
                                    " timestamps");

    const ImageU8 first = load_image(images.front().string());
    FrameManifest manifest;
    manifest.width = first.width;
    manifest.height = first.height;
    manifest.source_id = fs::path(video_path).stem().string();
    for (std::size_t i = 0; i < images.size(); ++i) {
        FrameManifest::Entry entry;
        entry.image_path = images[i].lexically_proximate(fs::path(out_dir)).generic_string();
        entry.pts_ms = timestamps[i];
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

namespace {

ImageU8 frame_pixels(const Frame& frame) {
    if (frame.image.data)
        return *frame.image.data;
    if (!frame.image.path.empty())
        return load_image(frame.image.path);
    fail(Errc::missing_image, "frame " + std::to_string(frame.index) + " has no pixel data");
}

} // namespace

Screencast normalize_timeline(const Screencast& cast, TimelineMode mode) {
    if (mode == TimelineMode::variable_rate)
        return cast;

    std::vector<std::pair<double, ImageRef>> kept;
    kept.reserve(cast.frame_count());
    ImageU8 prev;
    for (const Frame& frame : cast.frames()) {
        ImageU8 current = frame_pixels(frame);
        if (kept.empty() || current != prev) {
            kept.emplace_back(frame.pts_ms, frame.image);
            prev = std::move(current);
        }
    }
    if (kept.size() == cast.frame_count())
        return cast;
    if (kept.size() < 2)
        kept.emplace_back(cast.frames().back().pts_ms, cast.frames().back().image);
    return Screencast::make(std::move(kept), cast.width(), cast.height(), cast.source_id());
}

} // namespace lagscan
