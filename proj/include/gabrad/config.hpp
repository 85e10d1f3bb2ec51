#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "gabrad/errors.hpp"
#include "gabrad/gabor.hpp"
#include "gabrad/irma.hpp"
#include "gabrad/svm.hpp"

namespace gabrad {

/// Everything that shapes a pipeline run. Flat key=value config files and
/// CLI flags both funnel through set().
struct PipelineConfig {
    int image_side = 128;
    int sinogram_side = 32;
    int n_angles = 32;
    GaborParams gabor; // U=4 V=5 23x23 f_max=0.25 sqrt2 gamma=0.5 bw=1 phi=0 dc on
    int d1 = 4;
    int d2 = 4;

    KernelKind kernel = KernelKind::rbf;
    double svm_gamma = 0.0; // 0: auto 1/vector_dim
    int degree = 3;
    double coef0 = 1.0;
    double svm_c = 32.0;
    double tol = 1e-3;
    int max_passes = 100;
    bool scale_features = true;

    int knn = 1;

    bool error_propagate = true;
    bool error_normalize = true;
    bool error_axis_local = true;

    int workers = 1;
    std::uint64_t seed = 0;

    std::int64_t vector_dim() const {
        return vector_dimension(sinogram_side, sinogram_side,
                                gabor.n_scales * gabor.n_orients, d1, d2);
    }

    double resolved_svm_gamma() const {
        return svm_gamma > 0.0 ? svm_gamma : 1.0 / static_cast<double>(vector_dim());
    }

    KernelSpec kernel_spec() const {
        return KernelSpec{kernel, resolved_svm_gamma(), degree, coef0};
    }

    ExtractOptions extract_options() const {
        return ExtractOptions{n_angles, d1, d2, sinogram_side};
    }

    ErrorOptions error_options() const {
        return ErrorOptions{error_propagate, error_normalize, error_axis_local};
    }

    /// Hash of every parameter that shapes the descriptors. Artifacts built
    /// under different fingerprints must never be compared bit-to-bit.
    std::uint64_t fingerprint() const {
        char buf[512];
        std::snprintf(buf, sizeof(buf),
                      "side=%d;sino=%d;na=%d;U=%d;V=%d;wh=%d;ww=%d;fmax=%.17g;sf=%.17g;"
                      "gamma=%.17g;bw=%.17g;phi=%.17g;dc=%d;d1=%d;d2=%d",
                      image_side, sinogram_side, n_angles, gabor.n_scales, gabor.n_orients,
                      gabor.win_h, gabor.win_w, gabor.f_max, gabor.scale_factor, gabor.gamma,
                      gabor.bandwidth_octaves, gabor.phi, gabor.dc_correct ? 1 : 0, d1, d2);
        // FNV-1a 64
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const char* p = buf; *p; ++p) {
            h ^= static_cast<std::uint8_t>(*p);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    void set(const std::string& key, const std::string& value);
    void print(std::ostream& os) const;

    static PipelineConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) fail(Errc::missing_file, path);
        PipelineConfig cfg;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::size_t start = line.find_first_not_of(" \t");
            if (start == std::string::npos || line[start] == '#') continue;
            std::size_t eq = line.find('=', start);
            if (eq == std::string::npos)
                fail(Errc::malformed_row, path + ":" + std::to_string(line_no)
                                              + ": expected key=value");
            auto trim = [](std::string s) {
                std::size_t a = s.find_first_not_of(" \t");
                std::size_t b = s.find_last_not_of(" \t");
                return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
            };
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return cfg;
    }
};

namespace detail {

inline bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    fail(Errc::malformed_row, "expected boolean, got '" + v + "'");
}

} // namespace detail

inline void PipelineConfig::set(const std::string& key, const std::string& value) {
    try {
        if (key == "image_side") image_side = std::stoi(value);
        else if (key == "sinogram_side") sinogram_side = std::stoi(value);
        else if (key == "n_angles") n_angles = std::stoi(value);
        else if (key == "gabor_scales") gabor.n_scales = std::stoi(value);
        else if (key == "gabor_orients") gabor.n_orients = std::stoi(value);
        else if (key == "win_h") gabor.win_h = std::stoi(value);
        else if (key == "win_w") gabor.win_w = std::stoi(value);
        else if (key == "f_max") gabor.f_max = std::stod(value);
        else if (key == "scale_factor") gabor.scale_factor = std::stod(value);
        else if (key == "gabor_gamma") gabor.gamma = std::stod(value);
        else if (key == "bandwidth") gabor.bandwidth_octaves = std::stod(value);
        else if (key == "phi") gabor.phi = std::stod(value);
        else if (key == "dc_correct") gabor.dc_correct = detail::parse_bool(value);
        else if (key == "d1") d1 = std::stoi(value);
        else if (key == "d2") d2 = std::stoi(value);
        else if (key == "kernel") {
            if (value == "linear") kernel = KernelKind::linear;
            else if (value == "rbf") kernel = KernelKind::rbf;
            else if (value == "polynomial") kernel = KernelKind::polynomial;
            else fail(Errc::malformed_row, "unknown kernel '" + value + "'");
        }
        else if (key == "svm_gamma") svm_gamma = std::stod(value);
        else if (key == "degree") degree = std::stoi(value);
        else if (key == "coef0") coef0 = std::stod(value);
        else if (key == "svm_c") svm_c = std::stod(value);
        else if (key == "tol") tol = std::stod(value);
        else if (key == "max_passes") max_passes = std::stoi(value);
        else if (key == "scale_features") scale_features = detail::parse_bool(value);
        else if (key == "k") knn = std::stoi(value);
        else if (key == "error_propagate") error_propagate = detail::parse_bool(value);
        else if (key == "error_normalize") error_normalize = detail::parse_bool(value);
        else if (key == "error_axis_local") error_axis_local = detail::parse_bool(value);
        else if (key == "workers") workers = std::stoi(value);
        else if (key == "seed") seed = std::stoull(value);
        else fail(Errc::malformed_row, "unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        fail(Errc::malformed_row, "bad value for '" + key + "': " + value);
    } catch (const std::out_of_range&) {
        fail(Errc::malformed_row, "value out of range for '" + key + "': " + value);
    }
}

inline void PipelineConfig::print(std::ostream& os) const {
    os << "image_side=" << image_side << "\n"
       << "sinogram_side=" << sinogram_side << "\n"
       << "n_angles=" << n_angles << "\n"
       << "gabor_scales=" << gabor.n_scales << "\n"
       << "gabor_orients=" << gabor.n_orients << "\n"
       << "win_h=" << gabor.win_h << "\n"
       << "win_w=" << gabor.win_w << "\n"
       << "f_max=" << gabor.f_max << "\n"
       << "scale_factor=" << gabor.scale_factor << "\n"
       << "gabor_gamma=" << gabor.gamma << "\n"
       << "bandwidth=" << gabor.bandwidth_octaves << "\n"
       << "phi=" << gabor.phi << "\n"
       << "dc_correct=" << (gabor.dc_correct ? 1 : 0) << "\n"
       << "d1=" << d1 << "\n"
       << "d2=" << d2 << "\n"
       << "kernel=" << kernel_name(kernel) << "\n"
       << "svm_gamma=" << svm_gamma << " (resolved " << resolved_svm_gamma() << ")\n"
       << "degree=" << degree << "\n"
       << "coef0=" << coef0 << "\n"
       << "svm_c=" << svm_c << "\n"
       << "tol=" << tol << "\n"
       << "max_passes=" << max_passes << "\n"
       << "scale_features=" << (scale_features ? 1 : 0) << "\n"
       << "k=" << knn << "\n"
       << "error_propagate=" << (error_propagate ? 1 : 0) << "\n"
       << "error_normalize=" << (error_normalize ? 1 : 0) << "\n"
       << "error_axis_local=" << (error_axis_local ? 1 : 0) << "\n"
       << "workers=" << workers << "\n"
       << "seed=" << seed << "\n"
       << "vector_dim=" << vector_dim() << "\n"
       << "fingerprint=" << fingerprint() << "\n";
}

} // namespace gabrad
