#include "lagscan/error.hpp"

namespace lagscan {

const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::non_monotonic_pts: return "NonMonotonicPts";
    case Errc::too_few_frames: return "TooFewFrames";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::invalid_interval: return "InvalidInterval";
    case Errc::parse_error: return "ParseError";
    case Errc::missing_image: return "MissingImage";
    case Errc::decoder_failed: return "DecoderFailed";
    case Errc::no_frames_emitted: return "NoFramesEmitted";
    case Errc::empty_image: return "EmptyImage";
    case Errc::image_too_small: return "ImageTooSmall";
    case Errc::empty_scores: return "EmptyScores";
    case Errc::detector_unavailable: return "DetectorUnavailable";
    case Errc::protocol_error: return "ProtocolError";
    case Errc::detector_timeout: return "DetectorTimeout";
    case Errc::bad_weights: return "BadWeights";
    case Errc::io_error: return "IoError";
    case Errc::missing_frame_image: return "MissingFrameImage";
    case Errc::spec_error: return "SpecError";
    case Errc::bad_config: return "BadConfig";
    }
    return "UnknownError";
}

} // namespace lagscan
