#include "lagscan/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "lagscan/image_io.hpp"
#include "parallel.hpp"

namespace lagscan {

void SsimParams::validate() const {
    if (window_size < 3 || window_size % 2 == 0)
        fail(Errc::bad_config, "window_size must be odd and >= 3");
    if (!(gaussian_sigma > 0.0))
        fail(Errc::bad_config, "gaussian_sigma must be positive");
    if (!(k1 > 0.0) || !(k2 > 0.0))
        fail(Errc::bad_config, "k1 and k2 must be positive");
    if (!(dynamic_range > 0.0))
        fail(Errc::bad_config, "dynamic_range must be positive");
    if (downscale_max_dim && *downscale_max_dim < window_size)
        fail(Errc::bad_config, "downscale_max_dim must be >= window_size");
}

namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(static_cast<std::size_t>(size));
    const double center = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - center;
        k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (double& v : k)
        v /= sum;
    return k;
}

// Separable valid-region convolution: output is (h-win+1) x (w-win+1).
void valid_conv(const double* src, int w, int h, const std::vector<double>& kernel,
                std::vector<double>& tmp, std::vector<double>& out) {
    const int win = static_cast<int>(kernel.size());
    const int ow = w - win + 1;
    const int oh = h - win + 1;
    tmp.resize(static_cast<std::size_t>(h) * ow);
    out.resize(static_cast<std::size_t>(oh) * ow);

    for (int y = 0; y < h; ++y) {
        const double* row = src + static_cast<std::size_t>(y) * w;
        double* trow = tmp.data() + static_cast<std::size_t>(y) * ow;
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < win; ++i)
                acc += kernel[static_cast<std::size_t>(i)] * row[x + i];
            trow[x] = acc;
        }
    }
    for (int y = 0; y < oh; ++y) {
        double* orow = out.data() + static_cast<std::size_t>(y) * ow;
        for (int x = 0; x < ow; ++x)
            orow[x] = 0.0;
        for (int i = 0; i < win; ++i) {
            const double kv = kernel[static_cast<std::size_t>(i)];
            const double* trow = tmp.data() + static_cast<std::size_t>(y + i) * ow;
            for (int x = 0; x < ow; ++x)
                orow[x] += kv * trow[x];
        }
    }
}

} // namespace

double ssim(const GrayImage& a, const GrayImage& b, const SsimParams& params) {
    params.validate();
    if (a.empty() || b.empty())
        fail(Errc::empty_image, "ssim input is empty");
    if (a.width != b.width || a.height != b.height)
        fail(Errc::dimension_mismatch, "ssim inputs differ: " + std::to_string(a.width) + "x" +
                                           std::to_string(a.height) + " vs " +
                                           std::to_string(b.width) + "x" +
                                           std::to_string(b.height));
    if (a.width < params.window_size || a.height < params.window_size)
        fail(Errc::image_too_small, "image " + std::to_string(a.width) + "x" +
                                        std::to_string(a.height) + " below window size " +
                                        std::to_string(params.window_size));

    const int w = a.width;
    const int h = a.height;
    const std::size_t n = a.pixels.size();
    const auto kernel = gaussian_kernel(params.window_size, params.gaussian_sigma);

    std::vector<double> aa(n), bb(n), ab(n);
    for (std::size_t i = 0; i < n; ++i) {
        aa[i] = a.pixels[i] * a.pixels[i];
        bb[i] = b.pixels[i] * b.pixels[i];
        ab[i] = a.pixels[i] * b.pixels[i];
    }

    std::vector<double> tmp, mu_a, mu_b, e_aa, e_bb, e_ab;
    valid_conv(a.pixels.data(), w, h, kernel, tmp, mu_a);
    valid_conv(b.pixels.data(), w, h, kernel, tmp, mu_b);
    valid_conv(aa.data(), w, h, kernel, tmp, e_aa);
    valid_conv(bb.data(), w, h, kernel, tmp, e_bb);
    valid_conv(ab.data(), w, h, kernel, tmp, e_ab);

    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

    double total = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i];
        const double mb = mu_b[i];
        const double va = e_aa[i] - ma * ma;
        const double vb = e_bb[i] - mb * mb;
        const double cov = e_ab[i] - ma * mb;
        const double num = (2.0 * ma * mb + c1) * (2.0 * cov + c2);
        const double den = (ma * ma + mb * mb + c1) * (va + vb + c2);
        total += num / den;
    }
    return total / static_cast<double>(mu_a.size());
}

GrayImage analysis_image(const Frame& frame, const SsimParams& params) {
    GrayImage gray;
    if (frame.image.data) {
        gray = to_grayscale(*frame.image.data);
    } else if (!frame.image.path.empty()) {
        gray = to_grayscale(load_image(frame.image.path));
    } else {
        fail(Errc::missing_image, "frame " + std::to_string(frame.index) + " has no pixel data");
    }
    if (params.downscale_max_dim)
        gray = downscale_to_max_dim(gray, *params.downscale_max_dim);
    return gray;
}

std::vector<PairScore> pairwise_scores(const Screencast& cast, const SsimParams& params,
                                       unsigned threads) {
    params.validate();
    const std::size_t pair_count = cast.frame_count() - 1;
    std::vector<PairScore> scores(pair_count);

    const unsigned workers = detail::resolve_threads(threads);
    const std::size_t block = std::max<std::size_t>(static_cast<std::size_t>(workers) * 4, 16);

    // Stream frames block by block so memory stays bounded regardless of
    // screencast length; the trailing frame of each block carries over.
    GrayImage carried;
    bool have_carried = false;
    for (std::size_t begin = 0; begin < pair_count; begin += block) {
        const std::size_t end = std::min(pair_count, begin + block);
        const std::size_t frame_lo = begin;
        const std::size_t frame_hi = end; // inclusive frame range [frame_lo, frame_hi]
        std::vector<GrayImage> grays(frame_hi - frame_lo + 1);

        detail::parallel_for(grays.size(), workers, [&](std::size_t i) {
            if (i == 0 && have_carried) {
                grays[0] = std::move(carried);
                return;
            }
            grays[i] = analysis_image(cast.frame(frame_lo + i), params);
        });

        detail::parallel_for(end - begin, workers, [&](std::size_t i) {
            const std::size_t p = begin + i;
            scores[p] = PairScore{p, p + 1, ssim(grays[p - frame_lo], grays[p + 1 - frame_lo], params)};
        });

        carried = std::move(grays.back());
        have_carried = true;
    }
    return scores;
}

} // namespace lagscan
