#include "lagscan/placeholder.hpp"

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstring>
#include <set>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace lagscan {

void DetectorSpec::validate() const {
    if (kind == Kind::external && external_cmd.empty())
        fail(Errc::bad_config, "external detector requires external_cmd");
    if (kind == Kind::heuristic && !external_cmd.empty())
        fail(Errc::bad_config, "external_cmd set but detector kind is heuristic");
    if (confidence_floor < 0.0 || confidence_floor > 1.0)
        fail(Errc::bad_config, "confidence_floor must lie in [0,1]");
    if (!(max_gray_stddev > 0.0))
        fail(Errc::bad_config, "max_gray_stddev must be positive");
    if (!(min_region_area_fraction > 0.0) || min_region_area_fraction > 1.0)
        fail(Errc::bad_config, "min_region_area_fraction must lie in (0,1]");
    if (gray_band_lo >= gray_band_hi)
        fail(Errc::bad_config, "gray band is empty");
    if (!(timeout_sec > 0.0))
        fail(Errc::bad_config, "timeout_sec must be positive");
}

std::vector<PlaceholderRegion> detect_heuristic(const GrayImage& frame, const DetectorSpec& spec) {
    spec.validate();
    if (frame.empty())
        fail(Errc::empty_image, "detect_heuristic on empty frame");

    const int w = frame.width;
    const int h = frame.height;
    const double min_area = spec.min_region_area_fraction * static_cast<double>(w) * h;

    // Connected components (4-neighbourhood) of in-band pixels.
    std::vector<std::int32_t> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<PlaceholderRegion> regions;
    std::vector<std::size_t> stack;

    auto in_band = [&](std::size_t idx) {
        const double v = frame.pixels[idx];
        return v >= spec.gray_band_lo && v <= spec.gray_band_hi;
    };

    std::int32_t next_label = 0;
    for (std::size_t seed = 0; seed < label.size(); ++seed) {
        if (label[seed] != -1 || !in_band(seed))
            continue;
        const std::int32_t id = next_label++;
        stack.assign(1, seed);
        label[seed] = id;

        long long count = 0;
        double sum = 0.0, sum_sq = 0.0;
        int min_x = w, max_x = -1, min_y = h, max_y = -1;
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const int x = static_cast<int>(idx % static_cast<std::size_t>(w));
            const int y = static_cast<int>(idx / static_cast<std::size_t>(w));
            const double v = frame.pixels[idx];
            ++count;
            sum += v;
            sum_sq += v * v;
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);

            const std::size_t neighbours[4] = {
                x > 0 ? idx - 1 : idx,
                x < w - 1 ? idx + 1 : idx,
                y > 0 ? idx - static_cast<std::size_t>(w) : idx,
                y < h - 1 ? idx + static_cast<std::size_t>(w) : idx,
            };
            for (const std::size_t nb : neighbours) {
                if (nb != idx && label[nb] == -1 && in_band(nb)) {
                    label[nb] = id;
                    stack.push_back(nb);
                }
            }
        }

        if (static_cast<double>(count) < min_area)
            continue;
        const double mean = sum / static_cast<double>(count);
        const double variance = std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
        const double stddev = std::sqrt(variance);
        if (stddev > spec.max_gray_stddev)
            continue;
        regions.push_back(PlaceholderRegion{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1,
                                            1.0 - stddev / spec.max_gray_stddev,
                                            PlaceholderRegion::Source::heuristic});
    }
    return regions;
}

// ---------------------------------------------------------------------------
// External detector subprocess
// ---------------------------------------------------------------------------

ExternalDetector::ExternalDetector(DetectorSpec spec) : spec_(std::move(spec)) {
    if (spec_.kind != DetectorSpec::Kind::external)
        fail(Errc::bad_config, "ExternalDetector requires an external DetectorSpec");
    spec_.validate();
    spawn();
}

void ExternalDetector::spawn() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0)
        fail(Errc::detector_unavailable, std::string("pipe: ") + std::strerror(errno));
    if (pipe(from_child) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        fail(Errc::detector_unavailable, std::string("pipe: ") + std::strerror(errno));
    }

    const pid_t pid = fork();
    if (pid < 0) {
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        fail(Errc::detector_unavailable, std::string("fork: ") + std::strerror(errno));
    }
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        close(to_child[0]);
        close(to_child[1]);
        close(from_child[0]);
        close(from_child[1]);
        execl("/bin/sh", "sh", "-c", spec_.external_cmd.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(to_child[0]);
    close(from_child[1]);
    child_stdin_ = to_child[1];
    child_stdout_ = from_child[0];
    pid_ = pid;
}

ExternalDetector::~ExternalDetector() {
    if (child_stdin_ >= 0)
        close(child_stdin_);
    if (child_stdout_ >= 0)
        close(child_stdout_);
    if (pid_ > 0) {
        int status = 0;
        if (waitpid(static_cast<pid_t>(pid_), &status, WNOHANG) == 0) {
            kill(static_cast<pid_t>(pid_), SIGTERM);
            waitpid(static_cast<pid_t>(pid_), &status, 0);
        }
    }
}

std::string ExternalDetector::read_response_line() {
    const int timeout_ms = static_cast<int>(spec_.timeout_sec * 1000.0);
    for (;;) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        pollfd pfd{child_stdout_, POLLIN, 0};
        const int rc = poll(&pfd, 1, timeout_ms);
        if (rc == 0)
            fail(Errc::detector_timeout,
                 "no response within " + std::to_string(spec_.timeout_sec) + "s");
        if (rc < 0)
            fail(Errc::protocol_error, std::string("poll: ") + std::strerror(errno));
        char chunk[4096];
        const ssize_t n = read(child_stdout_, chunk, sizeof(chunk));
        if (n < 0)
            fail(Errc::protocol_error, std::string("read: ") + std::strerror(errno));
        if (n == 0) {
            if (!got_any_response_)
                fail(Errc::detector_unavailable, "detector exited before first response");
            fail(Errc::protocol_error, "detector closed its output mid-stream");
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::vector<PlaceholderRegion> ExternalDetector::detect(const std::string& frame_path, int frame_w,
                                                        int frame_h) {
    std::lock_guard<std::mutex> lock(mutex_);

    const int id = next_id_++;
    nlohmann::json request{{"frame", frame_path}, {"id", id}};
    std::string line = request.dump();
    line.push_back('\n');
    std::size_t written = 0;
    while (written < line.size()) {
        const ssize_t n = write(child_stdin_, line.data() + written, line.size() - written);
        if (n <= 0) {
            if (!got_any_response_)
                fail(Errc::detector_unavailable, "cannot write to detector process");
            fail(Errc::protocol_error, std::string("write: ") + std::strerror(errno));
        }
        written += static_cast<std::size_t>(n);
    }

    const std::string response = read_response_line();
    nlohmann::json doc = nlohmann::json::parse(response, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("id") || !doc.contains("boxes") ||
        !doc["boxes"].is_array())
        fail(Errc::protocol_error, "malformed detector response: " + response);
    if (doc["id"].get<int>() != id)
        fail(Errc::protocol_error, "response id " + doc["id"].dump() + " does not match request " +
                                       std::to_string(id));
    got_any_response_ = true;

    std::vector<PlaceholderRegion> regions;
    for (const auto& box : doc["boxes"]) {
        if (!box.is_object() || !box.contains("x") || !box.contains("y") || !box.contains("w") ||
            !box.contains("h") || !box.contains("conf"))
            fail(Errc::protocol_error, "malformed box in detector response: " + box.dump());
        const double conf = box["conf"].get<double>();
        if (conf < spec_.confidence_floor)
            continue;
        PlaceholderRegion region{box["x"].get<int>(), box["y"].get<int>(), box["w"].get<int>(),
                                 box["h"].get<int>(), conf, PlaceholderRegion::Source::external};
        if (frame_w > 0 && frame_h > 0) {
            const int x0 = std::clamp(region.x, 0, frame_w);
            const int y0 = std::clamp(region.y, 0, frame_h);
            const int x1 = std::clamp(region.x + region.w, 0, frame_w);
            const int y1 = std::clamp(region.y + region.h, 0, frame_h);
            region.x = x0;
            region.y = y0;
            region.w = x1 - x0;
            region.h = y1 - y0;
        }
        if (region.w <= 0 || region.h <= 0)
            continue;
        regions.push_back(region);
    }
    return regions;
}

std::vector<PlaceholderRegion> detect_external(const std::string& frame_path,
                                               const DetectorSpec& spec, int frame_w,
                                               int frame_h) {
    ExternalDetector detector(spec);
    return detector.detect(frame_path, frame_w, frame_h);
}

// ---------------------------------------------------------------------------
// Union area
// ---------------------------------------------------------------------------

long long union_area(std::span<const PlaceholderRegion> regions) {
    // Plane sweep over compressed x-coordinates with y-interval merging.
    std::vector<int> xs;
    xs.reserve(regions.size() * 2);
    for (const auto& r : regions) {
        if (r.w <= 0 || r.h <= 0)
            continue;
        xs.push_back(r.x);
        xs.push_back(r.x + r.w);
    }
    if (xs.empty())
        return 0;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    long long total = 0;
    std::vector<std::pair<int, int>> intervals;
    for (std::size_t s = 0; s + 1 < xs.size(); ++s) {
        const int x0 = xs[s];
        const int x1 = xs[s + 1];
        intervals.clear();
        for (const auto& r : regions) {
            if (r.w <= 0 || r.h <= 0)
                continue;
            if (r.x <= x0 && r.x + r.w >= x1)
                intervals.emplace_back(r.y, r.y + r.h);
        }
        if (intervals.empty())
            continue;
        std::sort(intervals.begin(), intervals.end());
        long long covered = 0;
        int cur_lo = intervals[0].first;
        int cur_hi = intervals[0].second;
        for (std::size_t k = 1; k < intervals.size(); ++k) {
            if (intervals[k].first > cur_hi) {
                covered += cur_hi - cur_lo;
                cur_lo = intervals[k].first;
                cur_hi = intervals[k].second;
            } else {
                cur_hi = std::max(cur_hi, intervals[k].second);
            }
        }
        covered += cur_hi - cur_lo;
        total += covered * static_cast<long long>(x1 - x0);
    }
    return total;
}

PlaceholderCheck has_placeholder(std::span<const PlaceholderRegion> regions, double frame_area_px,
                                 double min_area_fraction) {
    if (frame_area_px <= 0.0)
        return {};
    const double fraction = static_cast<double>(union_area(regions)) / frame_area_px;
    return PlaceholderCheck{fraction >= min_area_fraction, fraction};
}

} // namespace lagscan
