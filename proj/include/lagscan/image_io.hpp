#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lagscan/image.hpp"

namespace lagscan {

/// Decodes a PNG (or any lossless format the codec supports) into an
/// interleaved RGB or gray buffer. Throws MissingImage on failure.
ImageU8 load_image(const std::string& path);

/// Writes `image` as PNG. Throws IoError on failure.
void save_png(const ImageU8& image, const std::string& path);

/// PNG-encodes `image` in memory.
std::vector<std::uint8_t> encode_png(const ImageU8& image);

} // namespace lagscan
