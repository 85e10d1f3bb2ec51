#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gabrad/errors.hpp"
#include "gabrad/image.hpp"
#include "gabrad/irma.hpp"
#include "gabrad/rng.hpp"

namespace gabrad {

/// Desk-scale stand-in for a labeled radiograph corpus: parametric shape
/// families (disk, bars at fixed orientations, ring, cross, twin disks)
/// rendered with jittered position/scale plus mild noise. Every class maps
/// to one fixed 13-char code whose first axis encodes the shape family, so
/// retrieval errors behave hierarchically. Fully determined by the seed.
struct SynthOptions {
    int n_classes = 4;
    int train_per_class = 50;
    int test_per_class = 0;
    std::uint64_t seed = 7;
    int image_side = 112;
};

struct SynthResult {
    std::string train_manifest;
    std::string test_manifest;
    int images_written = 0;
};

namespace detail {

inline char synth_digit(int v) {
    return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

inline std::string synth_code(int cls) {
    std::string code;
    code += '1';
    code += synth_digit(1 + cls);
    code += synth_digit((cls * 2) % 7);
    code += '0';
    code += '1';
    code += synth_digit(cls % 3);
    code += '0';
    code += synth_digit(4 + cls % 5);
    code += '0';
    code += '0';
    code += '7';
    code += synth_digit(cls % 2);
    code += '0';
    return code;
}

/// Coverage-style soft edge: 1 inside, 0 outside, linear over ~1.5px.
inline double soft_step(double signed_dist) {
    return std::clamp(0.5 - signed_dist / 1.5, 0.0, 1.0);
}

inline Image render_shape(int family, int side, DetRng& rng) {
    double cx = side * (0.5 + rng.uniform(-0.06, 0.06));
    double cy = side * (0.5 + rng.uniform(-0.06, 0.06));
    double scale = side * rng.uniform(0.20, 0.30);
    double intensity = rng.uniform(0.75, 1.0);
    double noise_amp = 0.03;

    // families: 0 disk, 1 bar@0, 2 ring, 3 cross, 4 bar@45, 5 bar@90,
    // 6 bar@135, 7 twin disks
    double bar_angle = 0.0;
    if (family == 4) bar_angle = std::numbers::pi / 4;
    if (family == 5) bar_angle = std::numbers::pi / 2;
    if (family == 6) bar_angle = 3 * std::numbers::pi / 4;

    Image img(side, side, 0.0);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            double dx = x - cx, dy = y - cy;
            double r = std::hypot(dx, dy);
            double cov = 0.0;
            switch (family) {
                case 0: cov = soft_step(r - scale); break;
                case 1: case 4: case 5: case 6: {
                    double along = dx * std::cos(bar_angle) + dy * std::sin(bar_angle);
                    double across = -dx * std::sin(bar_angle) + dy * std::cos(bar_angle);
                    double half_len = scale * 1.4, half_thick = scale * 0.28;
                    double d = std::max(std::abs(along) - half_len, std::abs(across) - half_thick);
                    cov = soft_step(d);
                    break;
                }
                case 2: {
                    double band = scale * 0.22;
                    cov = soft_step(std::abs(r - scale) - band);
                    break;
                }
                case 3: {
                    double half_len = scale * 1.4, half_thick = scale * 0.22;
                    double dh = std::max(std::abs(dx) - half_len, std::abs(dy) - half_thick);
                    double dv = std::max(std::abs(dy) - half_len, std::abs(dx) - half_thick);
                    cov = std::max(soft_step(dh), soft_step(dv));
                    break;
                }
                case 7: {
                    double off = scale * 0.9, rad = scale * 0.55;
                    double d1 = std::hypot(dx - off, dy) - rad;
                    double d2 = std::hypot(dx + off, dy) - rad;
                    cov = std::max(soft_step(d1), soft_step(d2));
                    break;
                }
                default: break;
            }
            double v = cov * intensity + rng.uniform(-noise_amp, noise_amp);
            img.at(x, y) = std::clamp(v, 0.0, 1.0);
        }
    }
    return img;
}

} // namespace detail

constexpr int kSynthMaxClasses = 8;

inline SynthResult generate_synthetic(const std::string& out_dir, const SynthOptions& opt) {
    if (opt.n_classes < 1 || opt.n_classes > kSynthMaxClasses)
        fail(Errc::dimension_mismatch, "synth: 1.." + std::to_string(kSynthMaxClasses)
                                           + " classes supported");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    if (ec) fail(Errc::io_error, "cannot create " + out_dir + ": " + ec.message());

    SynthResult result;
    result.train_manifest = (fs::path(out_dir) / "train.tsv").string();
    result.test_manifest = (fs::path(out_dir) / "test.tsv").string();

    std::ofstream train(result.train_manifest), test(result.test_manifest);
    if (!train || !test) fail(Errc::io_error, "cannot write manifests under " + out_dir);
    train << "# synthetic training split, seed " << opt.seed << "\n";
    test << "# synthetic test split, seed " << opt.seed << "\n";

    DetRng rng(opt.seed);
    int serial = 0;
    for (int cls = 0; cls < opt.n_classes; ++cls) {
        std::string code = detail::synth_code(cls);
        int total = opt.train_per_class + opt.test_per_class;
        for (int i = 0; i < total; ++i) {
            Image img = detail::render_shape(cls, opt.image_side, rng);
            char name[32];
            std::snprintf(name, sizeof(name), "img_%05d.pgm", serial);
            std::string rel = std::string("images/") + name;
            write_pgm(img, (fs::path(out_dir) / rel).string());
            char id[32];
            std::snprintf(id, sizeof(id), "syn%05d", serial);
            std::ofstream& sink = i < opt.train_per_class ? train : test;
            sink << id << "\t" << rel << "\t" << code << "\n";
            ++serial;
            ++result.images_written;
        }
    }
    if (!train.good() || !test.good()) fail(Errc::io_error, "failed writing manifests");
    return result;
}

} // namespace gabrad
