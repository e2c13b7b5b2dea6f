#pragma once

#include <stdexcept>
#include <string>

namespace lagscan {

enum class Errc {
    non_monotonic_pts,
    too_few_frames,
    dimension_mismatch,
    index_out_of_range,
    invalid_interval,
    parse_error,
    missing_image,
    decoder_failed,
    no_frames_emitted,
    empty_image,
    image_too_small,
    empty_scores,
    detector_unavailable,
    protocol_error,
    detector_timeout,
    bad_weights,
    io_error,
    missing_frame_image,
    spec_error,
    bad_config,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace lagscan
