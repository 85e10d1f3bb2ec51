#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gabrad/bitvec.hpp"
#include "gabrad/errors.hpp"
#include "gabrad/image.hpp"

namespace gabrad {

/// Discrete Radon transform of a square image: n_bins radial samples by
/// n_angles projections over [0, 180) degrees.
struct Sinogram {
    int n_bins = 0;
    int n_angles = 0;
    std::vector<double> data;       // row-major n_bins x n_angles
    std::vector<double> angles_deg; // length n_angles

    double& at(int bin, int angle) { return data[static_cast<std::size_t>(bin) * n_angles + angle]; }
    double at(int bin, int angle) const { return data[static_cast<std::size_t>(bin) * n_angles + angle]; }

    Image as_image() const {
        Image img(n_angles, n_bins);
        img.pixels = data;
        return img;
    }
};

struct RadonBarcode {
    BitVec bits;
    int n_angles = 0;
    int bits_per_angle = 0;
};

/// Radial bin count for a side x side image: ceil(side*sqrt(2)), bumped to
/// odd so the center ray lands exactly on a bin.
inline int radon_bin_count(int side) {
    int n = static_cast<int>(std::ceil(side * std::numbers::sqrt2));
    if (n % 2 == 0) ++n;
    return n;
}

/// Rotate-and-sum sinogram. Each angle rotates the image by -theta about
/// its center with bilinear interpolation and sums columns; the rotation is
/// applied in scatter form, with every pixel split into 2x2 quarter-pixels
/// whose values divide linearly between the two nearest radial bins. The
/// scatter form keeps each projection's total exactly equal to the image
/// mass, the quarter-pixel split cancels the bin-to-bin comb ripple that
/// whole-pixel scattering shows at diagonal angles, and bins outside the
/// rotated support stay zero.
inline Sinogram radon_transform(const Image& img, int n_angles) {
    if (img.width != img.height)
        fail(Errc::non_square_input, "radon_transform expects a square image");
    if (n_angles < 1) fail(Errc::dimension_mismatch, "radon_transform: n_angles must be >= 1");

    int side = img.width;
    int n_bins = radon_bin_count(side);
    double center = (side - 1) / 2.0;
    double bin_center = (n_bins - 1) / 2.0;

    Sinogram sino;
    sino.n_bins = n_bins;
    sino.n_angles = n_angles;
    sino.data.assign(static_cast<std::size_t>(n_bins) * n_angles, 0.0);
    sino.angles_deg.resize(n_angles);

    for (int k = 0; k < n_angles; ++k) {
        double deg = k * 180.0 / n_angles;
        sino.angles_deg[k] = deg;
        double theta = deg * std::numbers::pi / 180.0;
        double ct = std::cos(theta), st = std::sin(theta);
        // quarter-pixel centers relative to the pixel center, projected
        const double sub[2] = {-0.25, 0.25};
        for (int y = 0; y < side; ++y) {
            double ys = (y - center) * st;
            for (int x = 0; x < side; ++x) {
                double v = img.at(x, y);
                if (v == 0.0) continue;
                double quarter = 0.25 * v;
                double rho = (x - center) * ct + ys;
                for (double dx : sub) {
                    for (double dy : sub) {
                        double r = rho + dx * ct + dy * st + bin_center;
                        int r0 = static_cast<int>(std::floor(r));
                        double f = r - r0;
                        // corner quarter-pixels can poke a fraction of a bin
                        // past the sampled range on sides where ceil(s*sqrt2)
                        // is tight; fold them into the edge bin
                        if (r0 < 0) { r0 = 0; f = 0.0; }
                        if (r0 > n_bins - 2) { r0 = n_bins - 2; f = 1.0; }
                        sino.at(r0, k) += quarter * (1.0 - f);
                        sino.at(r0 + 1, k) += quarter * f;
                    }
                }
            }
        }
    }
    return sino;
}

namespace detail {

/// Median; an even count averages the two central values.
inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// 1-D bilinear resample with pixel-center alignment (the radial analogue
/// of Image resize).
inline std::vector<double> resample_linear(const std::vector<double>& src, int out_n) {
    std::vector<double> out(static_cast<std::size_t>(out_n));
    if (static_cast<int>(src.size()) == out_n) {
        std::copy(src.begin(), src.end(), out.begin());
        return out;
    }
    double scale = static_cast<double>(src.size()) / out_n;
    for (int i = 0; i < out_n; ++i) {
        double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(src.size() - 1));
        int s0 = static_cast<int>(s);
        int s1 = std::min<int>(s0 + 1, static_cast<int>(src.size()) - 1);
        double f = s - s0;
        out[static_cast<std::size_t>(i)] = src[static_cast<std::size_t>(s0)] * (1.0 - f)
                                         + src[static_cast<std::size_t>(s1)] * f;
    }
    return out;
}

} // namespace detail

/// Classic Radon barcode: per angle, resample the projection to
/// bits_per_angle samples, threshold at the median of the strictly positive
/// samples (bit = sample >= threshold), and concatenate in angle order. An
/// all-zero projection contributes all-zero bits.
inline RadonBarcode radon_barcode(const Sinogram& sino, int bits_per_angle = 32) {
    if (bits_per_angle < 1)
        fail(Errc::dimension_mismatch, "radon_barcode: bits_per_angle must be >= 1");

    RadonBarcode bc;
    bc.n_angles = sino.n_angles;
    bc.bits_per_angle = bits_per_angle;
    bc.bits = BitVec(static_cast<std::size_t>(sino.n_angles) * bits_per_angle);

    std::vector<double> column(static_cast<std::size_t>(sino.n_bins));
    for (int k = 0; k < sino.n_angles; ++k) {
        for (int r = 0; r < sino.n_bins; ++r) column[static_cast<std::size_t>(r)] = sino.at(r, k);
        std::vector<double> samples = detail::resample_linear(column, bits_per_angle);

        std::vector<double> positive;
        for (double s : samples)
            if (s > 0.0) positive.push_back(s);
        if (positive.empty()) continue; // all-zero projection: bits stay 0

        double threshold = detail::median_of(std::move(positive));
        for (int i = 0; i < bits_per_angle; ++i)
            if (samples[static_cast<std::size_t>(i)] >= threshold)
                bc.bits.set(static_cast<std::size_t>(k) * bits_per_angle + i, true);
    }
    return bc;
}

} // namespace gabrad
