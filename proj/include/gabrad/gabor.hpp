#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "gabrad/bitvec.hpp"
#include "gabrad/errors.hpp"
#include "gabrad/image.hpp"
#include "gabrad/radon.hpp"

namespace gabrad {

struct GaborParams {
    int n_scales = 4;            // U
    int n_orients = 5;           // V
    int win_h = 23;              // odd
    int win_w = 23;              // odd
    double f_max = 0.25;         // central frequency of scale 0, cycles/pixel
    double scale_factor = std::numbers::sqrt2;
    double gamma = 0.5;          // spatial aspect ratio
    double bandwidth_octaves = 1.0;
    double phi = 0.0;            // carrier phase, radians
    bool dc_correct = true;      // zero-mean the real part of each kernel

    bool valid() const {
        return n_scales >= 1 && n_orients >= 1 && win_h >= 1 && win_w >= 1
            && win_h % 2 == 1 && win_w % 2 == 1 && f_max > 0.0 && f_max <= 0.5
            && scale_factor > 1.0 && gamma > 0.0 && bandwidth_octaves > 0.0;
    }
};

struct GaborKernel {
    int u = 0, v = 0;      // scale / orientation indices
    double omega = 0.0;    // cycles/pixel
    double theta = 0.0;    // radians
    int width = 0, height = 0;
    std::vector<std::complex<double>> taps; // row-major

    std::complex<double> at(int x, int y) const {
        return taps[static_cast<std::size_t>(y) * width + x];
    }
};

struct GaborBank {
    GaborParams params;
    std::vector<GaborKernel> kernels; // u-major, then v
};

/// Gaussian width from frequency and half-magnitude bandwidth in octaves.
inline double gabor_sigma(double omega, double bandwidth_octaves) {
    double ratio = (std::pow(2.0, bandwidth_octaves) + 1.0)
                 / (std::pow(2.0, bandwidth_octaves) - 1.0);
    return std::sqrt(std::numbers::ln2 / 2.0) * ratio / (std::numbers::pi * omega);
}

/// Sample the complex Gabor kernel grid for every (scale, orientation):
/// omega_u = f_max / scale_factor^u, theta_v = pi*v/V, evaluated on the
/// integer grid centered at the window center. With dc_correct the real
/// part is shifted to zero mean so responses ignore the input's DC level.
inline GaborBank build_bank(const GaborParams& params) {
    if (!params.valid()) fail(Errc::dimension_mismatch, "invalid Gabor parameters");

    GaborBank bank;
    bank.params = params;
    bank.kernels.reserve(static_cast<std::size_t>(params.n_scales) * params.n_orients);

    int cx = params.win_w / 2, cy = params.win_h / 2;
    for (int u = 0; u < params.n_scales; ++u) {
        double omega = params.f_max / std::pow(params.scale_factor, u);
        double sigma = gabor_sigma(omega, params.bandwidth_octaves);
        double amp = omega * omega / (std::numbers::pi * params.gamma);
        for (int v = 0; v < params.n_orients; ++v) {
            double theta = std::numbers::pi * v / params.n_orients;
            double ct = std::cos(theta), st = std::sin(theta);

            GaborKernel k;
            k.u = u; k.v = v; k.omega = omega; k.theta = theta;
            k.width = params.win_w; k.height = params.win_h;
            k.taps.resize(static_cast<std::size_t>(params.win_w) * params.win_h);

            double real_sum = 0.0;
            for (int yy = 0; yy < params.win_h; ++yy) {
                double y = yy - cy;
                for (int xx = 0; xx < params.win_w; ++xx) {
                    double x = xx - cx;
                    double xp = x * ct + y * st;
                    double yp = -x * st + y * ct;
                    double envelope = amp * std::exp(-(xp * xp + params.gamma * params.gamma * yp * yp)
                                                     / (2.0 * sigma * sigma));
                    double phase = 2.0 * std::numbers::pi * omega * xp + params.phi;
                    std::complex<double> tap = envelope
                        * std::complex<double>(std::cos(phase), std::sin(phase));
                    k.taps[static_cast<std::size_t>(yy) * params.win_w + xx] = tap;
                    real_sum += tap.real();
                }
            }
            if (params.dc_correct) {
                double mean = real_sum / static_cast<double>(k.taps.size());
                for (auto& tap : k.taps) tap -= mean;
            }
            bank.kernels.push_back(std::move(k));
        }
    }
    return bank;
}

/// Complex same-size raster; the response plane of one Gabor kernel.
struct ComplexImage {
    int width = 0, height = 0;
    std::vector<std::complex<double>> values;

    std::complex<double>& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::complex<double> at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// True 2-D convolution (kernel flipped relative to correlation), zero
/// padded, same-size output: out(x,y) = sum_{s,t} in(x-s, y-t) * K(s,t)
/// with (s,t) running over the centered kernel grid.
inline ComplexImage convolve(const Image& img, const GaborKernel& kernel) {
    if (kernel.width > img.width || kernel.height > img.height)
        fail(Errc::kernel_larger_than_image, "convolve: kernel exceeds image");

    int cw = kernel.width / 2, ch = kernel.height / 2;
    ComplexImage out;
    out.width = img.width;
    out.height = img.height;
    out.values.assign(static_cast<std::size_t>(img.width) * img.height, {0.0, 0.0});

    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::complex<double> acc{0.0, 0.0};
            for (int t = -ch; t <= ch; ++t) {
                int sy = y - t;
                if (sy < 0 || sy >= img.height) continue;
                const std::complex<double>* krow =
                    &kernel.taps[static_cast<std::size_t>(t + ch) * kernel.width];
                for (int s = -cw; s <= cw; ++s) {
                    int sx = x - s;
                    if (sx < 0 || sx >= img.width) continue;
                    acc += img.at(sx, sy) * krow[s + cw];
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

/// Feature length M*N*n_g / (d1*d2).
inline std::int64_t vector_dimension(int m, int n, int n_g, int d1, int d2) {
    if (m < 1 || n < 1 || n_g < 1 || d1 < 1 || d2 < 1)
        fail(Errc::dimension_mismatch, "vector_dimension: arguments must be positive");
    std::int64_t numerator = static_cast<std::int64_t>(m) * n * n_g;
    std::int64_t denominator = static_cast<std::int64_t>(d1) * d2;
    if (numerator % denominator != 0)
        fail(Errc::non_integer_dimension, "vector_dimension: d1*d2 does not divide M*N*n_g");
    return numerator / denominator;
}

struct GaborRadonFeatures {
    std::vector<double> grf; // pooled response magnitudes, (u,v)-blocks flattened row-major
    BitVec grbf;             // per-block median-thresholded bits, same layout
};

struct ExtractOptions {
    int n_angles = 32;
    int d1 = 4, d2 = 4;
    int sinogram_side = 32;
};

/// Full per-image feature pipeline: sinogram, resize to sinogram_side^2,
/// then for each kernel take |response|, mean-pool d1 x d2 blocks, append
/// the flattened block to the GRF, and threshold it at its own median
/// (bit = value >= median) to extend the GRBF.
inline GaborRadonFeatures extract_gabor_radon(const Image& img, const GaborBank& bank,
                                              const ExtractOptions& opt) {
    if (opt.sinogram_side % opt.d1 != 0 || opt.sinogram_side % opt.d2 != 0)
        fail(Errc::non_integer_dimension, "extract: d1/d2 must divide the sinogram side");

    Sinogram sino = radon_transform(img, opt.n_angles);
    Image small = resize(sino.as_image(), opt.sinogram_side, opt.sinogram_side);

    int block_rows = opt.sinogram_side / opt.d1;
    int block_cols = opt.sinogram_side / opt.d2;
    std::size_t block_len = static_cast<std::size_t>(block_rows) * block_cols;

    GaborRadonFeatures out;
    out.grf.reserve(block_len * bank.kernels.size());
    out.grbf = BitVec(block_len * bank.kernels.size());

    std::vector<double> pooled(block_len);
    std::size_t bit_base = 0;
    for (const GaborKernel& kernel : bank.kernels) {
        ComplexImage response = convolve(small, kernel);

        for (int by = 0; by < block_rows; ++by) {
            for (int bx = 0; bx < block_cols; ++bx) {
                double sum = 0.0;
                for (int dy = 0; dy < opt.d1; ++dy)
                    for (int dx = 0; dx < opt.d2; ++dx)
                        sum += std::abs(response.at(bx * opt.d2 + dx, by * opt.d1 + dy));
                pooled[static_cast<std::size_t>(by) * block_cols + bx] =
                    sum / (static_cast<double>(opt.d1) * opt.d2);
            }
        }

        double threshold = detail::median_of(pooled);
        for (std::size_t i = 0; i < block_len; ++i) {
            out.grf.push_back(pooled[i]);
            if (pooled[i] >= threshold) out.grbf.set(bit_base + i, true);
        }
        bit_base += block_len;
    }
    return out;
}

} // namespace gabrad
