#include "lagscan/image_io.hpp"

#include <cstring>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace lagscan {

namespace {

// OpenCV mats are BGR(A); ImageU8 is RGB. Swap manually to keep the
// dependency to core+imgcodecs.
ImageU8 from_mat(const cv::Mat& mat) {
    ImageU8 img;
    img.width = mat.cols;
    img.height = mat.rows;
    img.channels = mat.channels() >= 3 ? 3 : 1;
    img.pixels.resize(static_cast<std::size_t>(mat.cols) * mat.rows * img.channels);
    const int in_ch = mat.channels();
    for (int y = 0; y < mat.rows; ++y) {
        const std::uint8_t* src = mat.ptr(y);
        std::uint8_t* dst =
            img.pixels.data() + static_cast<std::size_t>(y) * mat.cols * img.channels;
        if (img.channels == 1) {
            std::memcpy(dst, src, static_cast<std::size_t>(mat.cols));
        } else {
            for (int x = 0; x < mat.cols; ++x) {
                dst[x * 3 + 0] = src[x * in_ch + 2];
                dst[x * 3 + 1] = src[x * in_ch + 1];
                dst[x * 3 + 2] = src[x * in_ch + 0];
            }
        }
    }
    return img;
}

cv::Mat to_mat(const ImageU8& image) {
    if (image.empty())
        fail(Errc::empty_image, "cannot encode empty image");
    if (image.channels != 1 && image.channels != 3)
        fail(Errc::io_error, "unsupported channel count " + std::to_string(image.channels));
    cv::Mat mat(image.height, image.width, image.channels == 3 ? CV_8UC3 : CV_8UC1);
    for (int y = 0; y < image.height; ++y) {
        std::uint8_t* dst = mat.ptr(y);
        const std::uint8_t* src =
            image.pixels.data() + static_cast<std::size_t>(y) * image.width * image.channels;
        if (image.channels == 1) {
            std::memcpy(dst, src, static_cast<std::size_t>(image.width));
        } else {
            for (int x = 0; x < image.width; ++x) {
                dst[x * 3 + 0] = src[x * 3 + 2];
                dst[x * 3 + 1] = src[x * 3 + 1];
                dst[x * 3 + 2] = src[x * 3 + 0];
            }
        }
    }
    return mat;
}

} // namespace

ImageU8 load_image(const std::string& path) {
    cv::Mat mat = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (mat.empty())
        fail(Errc::missing_image, "cannot read image '" + path + "'");
    if (mat.depth() != CV_8U) {
        cv::Mat u8;
        mat.convertTo(u8, CV_8U);
        mat = u8;
    }
    return from_mat(mat);
}

void save_png(const ImageU8& image, const std::string& path) {
    try {
        if (!cv::imwrite(path, to_mat(image)))
            fail(Errc::io_error, "cannot write image '" + path + "'");
    } catch (const cv::Exception& e) {
        fail(Errc::io_error, "cannot write image '" + path + "': " + e.what());
    }
}

std::vector<std::uint8_t> encode_png(const ImageU8& image) {
    std::vector<std::uint8_t> out;
    try {
        if (!cv::imencode(".png", to_mat(image), out))
            fail(Errc::io_error, "png encode failed");
    } catch (const cv::Exception& e) {
        fail(Errc::io_error, std::string("png encode failed: ") + e.what());
    }
    return out;
}

} // namespace lagscan
