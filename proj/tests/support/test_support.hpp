#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lagscan/image.hpp"
#include "lagscan/model.hpp"

namespace lagscan::test {

// Deterministic 64-bit mixer for test fixtures.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return mix64(state_++); }
    double uniform() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool coin(double p = 0.5) { return uniform() < p; }

private:
    std::uint64_t state_;
};

inline GrayImage random_gray(int w, int h, std::uint64_t seed, double lo = 0.0,
                             double hi = 255.0) {
    Rng rng(seed);
    GrayImage img = GrayImage::filled(w, h, 0.0);
    for (double& px : img.pixels)
        px = rng.uniform(lo, hi);
    return img;
}

inline ImageU8 random_u8(int w, int h, std::uint64_t seed, int channels = 1) {
    Rng rng(seed);
    ImageU8 img = ImageU8::filled(w, h, channels, 0);
    for (auto& px : img.pixels)
        px = static_cast<std::uint8_t>(rng.next() % 256);
    return img;
}

inline ImageRef ref_of(ImageU8 img) {
    ImageRef ref;
    ref.data = std::make_shared<const ImageU8>(std::move(img));
    return ref;
}

/// Builds an in-memory screencast from (pts, image) pairs.
inline Screencast make_cast(std::vector<std::pair<double, ImageU8>> frames,
                            const std::string& source = "test") {
    std::vector<std::pair<double, ImageRef>> refs;
    const int w = frames.front().second.width;
    const int h = frames.front().second.height;
    refs.reserve(frames.size());
    for (auto& [pts, img] : frames)
        refs.emplace_back(pts, ref_of(std::move(img)));
    return Screencast::make(std::move(refs), w, h, source);
}

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("lagscan_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& child = "") const {
        return child.empty() ? path_.string() : (path_ / child).string();
    }

private:
    std::filesystem::path path_;
};

} // namespace lagscan::test
