#pragma once

#include <cmath>
#include <vector>

#include "lagscan/image.hpp"
#include "lagscan/similarity.hpp"

namespace lagscan::test {

/// Naive double-loop SSIM oracle. Deliberately independent of the
/// production path: builds the 2D Gaussian window directly and uses
/// centred moments instead of separable convolutions of raw moments.
inline double ssim_reference(const GrayImage& a, const GrayImage& b,
                             const SsimParams& params = {}) {
    const int win = params.window_size;
    const double center = (win - 1) / 2.0;
    std::vector<double> weights(static_cast<std::size_t>(win) * win);
    double wsum = 0.0;
    for (int j = 0; j < win; ++j)
        for (int i = 0; i < win; ++i) {
            const double dj = j - center;
            const double di = i - center;
            const double w =
                std::exp(-(di * di + dj * dj) / (2.0 * params.gaussian_sigma * params.gaussian_sigma));
            weights[static_cast<std::size_t>(j) * win + i] = w;
            wsum += w;
        }
    for (double& w : weights)
        w /= wsum;

    const double c1 = (params.k1 * params.dynamic_range) * (params.k1 * params.dynamic_range);
    const double c2 = (params.k2 * params.dynamic_range) * (params.k2 * params.dynamic_range);

    double total = 0.0;
    long count = 0;
    for (int y = 0; y + win <= a.height; ++y) {
        for (int x = 0; x + win <= a.width; ++x) {
            double mu_a = 0.0, mu_b = 0.0;
            for (int j = 0; j < win; ++j)
                for (int i = 0; i < win; ++i) {
                    const double w = weights[static_cast<std::size_t>(j) * win + i];
                    mu_a += w * a.at(x + i, y + j);
                    mu_b += w * b.at(x + i, y + j);
                }
            double var_a = 0.0, var_b = 0.0, cov = 0.0;
            for (int j = 0; j < win; ++j)
                for (int i = 0; i < win; ++i) {
                    const double w = weights[static_cast<std::size_t>(j) * win + i];
                    const double da = a.at(x + i, y + j) - mu_a;
                    const double db = b.at(x + i, y + j) - mu_b;
                    var_a += w * da * da;
                    var_b += w * db * db;
                    cov += w * da * db;
                }
            const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
            const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
            total += num / den;
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

} // namespace lagscan::test
