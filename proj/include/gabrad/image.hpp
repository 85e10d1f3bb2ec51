#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <png.h>

#include "gabrad/errors.hpp"

namespace gabrad {

/// Row-major grayscale raster. Decoded images hold intensities in [0,1];
/// the same container is reused for sinograms and filter responses, which
/// are not bounded.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> pixels; // width * height, row-major

    Image() = default;
    Image(int w, int h, double fill = 0.0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

    bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
    bool operator==(const Image& o) const = default;
};

enum class ImageFormat { auto_detect, png, pgm, bmp, tiff };

namespace detail {

constexpr double kLumaR = 0.299, kLumaG = 0.587, kLumaB = 0.114;

inline double luminance(double r, double g, double b) {
    return kLumaR * r + kLumaG * g + kLumaB * b;
}

// ---- PNM (PGM P2/P5, PPM P6) ----

struct PnmCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t off = 0;

    int next_token_int() {
        // skip whitespace and '#' comments
        while (off < bytes.size()) {
            char c = static_cast<char>(bytes[off]);
            if (c == '#') {
                while (off < bytes.size() && bytes[off] != '\n') ++off;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++off;
            } else {
                break;
            }
        }
        if (off >= bytes.size() || !std::isdigit(bytes[off]))
            fail(Errc::malformed_image, "pnm: expected integer in header");
        long v = 0;
        while (off < bytes.size() && std::isdigit(bytes[off])) {
            v = v * 10 + (bytes[off] - '0');
            if (v > 1 << 30) fail(Errc::malformed_image, "pnm: header value out of range");
            ++off;
        }
        return static_cast<int>(v);
    }
};

inline Image decode_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P')
        fail(Errc::malformed_image, "pnm: missing magic");
    char kind = static_cast<char>(bytes[1]);
    if (kind != '2' && kind != '5' && kind != '6')
        fail(Errc::unsupported_format, "pnm: only P2/P5/P6 supported");

    PnmCursor cur{bytes, 2};
    int w = cur.next_token_int();
    int h = cur.next_token_int();
    int maxval = cur.next_token_int();
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535)
        fail(Errc::malformed_image, "pnm: bad dimensions or maxval");

    Image img(w, h);
    std::size_t n = static_cast<std::size_t>(w) * h;

    if (kind == '2') {
        for (std::size_t i = 0; i < n; ++i) {
            int v = cur.next_token_int();
            if (v > maxval) fail(Errc::malformed_image, "pnm: sample exceeds maxval");
            img.pixels[i] = static_cast<double>(v) / maxval;
        }
        return img;
    }

    // binary payload begins after a single whitespace byte
    if (cur.off >= bytes.size() || !std::isspace(bytes[cur.off]))
        fail(Errc::malformed_image, "pnm: missing separator before raster");
    std::size_t p = cur.off + 1;
    int channels = (kind == '6') ? 3 : 1;
    int sample_bytes = maxval > 255 ? 2 : 1;
    std::size_t need = n * channels * sample_bytes;
    if (bytes.size() - p < need) fail(Errc::malformed_image, "pnm: truncated raster");

    auto sample = [&](std::size_t idx) -> double {
        if (sample_bytes == 1) return static_cast<double>(bytes[p + idx]) / maxval;
        // 16-bit PNM samples are big-endian
        unsigned v = (static_cast<unsigned>(bytes[p + 2 * idx]) << 8) | bytes[p + 2 * idx + 1];
        return static_cast<double>(v) / maxval;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (channels == 1) {
            img.pixels[i] = sample(i);
        } else {
            img.pixels[i] = luminance(sample(3 * i), sample(3 * i + 1), sample(3 * i + 2));
        }
    }
    return img;
}

// ---- BMP (uncompressed 8-bit palette / 24-bit / 32-bit) ----

inline std::uint32_t rd_u32le(const std::uint8_t* p) {
    return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
inline std::uint16_t rd_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline Image decode_bmp(std::span<const std::uint8_t> b) {
    if (b.size() < 54 || b[0] != 'B' || b[1] != 'M')
        fail(Errc::malformed_image, "bmp: missing magic");
    std::uint32_t data_off = rd_u32le(&b[10]);
    std::uint32_t dib_size = rd_u32le(&b[14]);
    if (dib_size < 40) fail(Errc::unsupported_format, "bmp: pre-BITMAPINFOHEADER files unsupported");
    std::int32_t w = static_cast<std::int32_t>(rd_u32le(&b[18]));
    std::int32_t h = static_cast<std::int32_t>(rd_u32le(&b[22]));
    std::uint16_t bpp = rd_u16le(&b[28]);
    std::uint32_t compression = rd_u32le(&b[30]);
    std::uint32_t clr_used = rd_u32le(&b[46]);
    bool bottom_up = h > 0;
    std::int32_t height = bottom_up ? h : -h;
    if (w <= 0 || height <= 0) fail(Errc::malformed_image, "bmp: bad dimensions");
    if (compression != 0) fail(Errc::unsupported_format, "bmp: only BI_RGB supported");
    if (bpp != 8 && bpp != 24 && bpp != 32)
        fail(Errc::unsupported_format, "bmp: only 8/24/32 bpp supported");

    const std::uint8_t* palette = nullptr;
    std::uint32_t palette_n = 0;
    if (bpp == 8) {
        palette_n = clr_used ? clr_used : 256;
        std::size_t pal_off = 14 + dib_size;
        if (b.size() < pal_off + 4 * palette_n) fail(Errc::malformed_image, "bmp: truncated palette");
        palette = &b[pal_off];
    }

    std::size_t row_bytes = (static_cast<std::size_t>(w) * bpp / 8 + 3) & ~std::size_t{3};
    if (b.size() < data_off + row_bytes * height) fail(Errc::malformed_image, "bmp: truncated raster");

    Image img(w, height);
    for (std::int32_t y = 0; y < height; ++y) {
        std::int32_t src_y = bottom_up ? height - 1 - y : y;
        const std::uint8_t* row = &b[data_off + row_bytes * src_y];
        for (std::int32_t x = 0; x < w; ++x) {
            double r, g, bl;
            if (bpp == 8) {
                std::uint8_t idx = row[x];
                if (idx >= palette_n) fail(Errc::malformed_image, "bmp: palette index out of range");
                const std::uint8_t* e = palette + 4 * idx; // BGRA
                bl = e[0] / 255.0; g = e[1] / 255.0; r = e[2] / 255.0;
            } else {
                const std::uint8_t* px = row + x * (bpp / 8); // BGR(A)
                bl = px[0] / 255.0; g = px[1] / 255.0; r = px[2] / 255.0;
            }
            img.at(x, y) = luminance(r, g, bl);
        }
    }
    return img;
}

// ---- TIFF (single-strip-set uncompressed grayscale, 8/16 bit, II/MM) ----

struct TiffReader {
    std::span<const std::uint8_t> b;
    bool le = true;

    std::uint16_t u16(std::size_t off) const {
        if (off + 2 > b.size()) fail(Errc::malformed_image, "tiff: truncated");
        return le ? static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8))
                  : static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
    }
    std::uint32_t u32(std::size_t off) const {
        if (off + 4 > b.size()) fail(Errc::malformed_image, "tiff: truncated");
        return le ? (b[off] | (b[off + 1] << 8) | (b[off + 2] << 16)
                     | (static_cast<std::uint32_t>(b[off + 3]) << 24))
                  : ((static_cast<std::uint32_t>(b[off]) << 24) | (b[off + 1] << 16)
                     | (b[off + 2] << 8) | b[off + 3]);
    }
};

inline Image decode_tiff(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8) fail(Errc::malformed_image, "tiff: truncated header");
    TiffReader t{bytes, true};
    if (bytes[0] == 'I' && bytes[1] == 'I') t.le = true;
    else if (bytes[0] == 'M' && bytes[1] == 'M') t.le = false;
    else fail(Errc::malformed_image, "tiff: missing byte-order mark");
    if (t.u16(2) != 42) fail(Errc::malformed_image, "tiff: bad magic");

    std::size_t ifd = t.u32(4);
    std::uint16_t n_entries = t.u16(ifd);

    std::uint32_t width = 0, height = 0, bits = 8, compression = 1, photometric = 1;
    std::uint32_t samples = 1, rows_per_strip = 0xFFFFFFFF;
    std::vector<std::uint32_t> strip_offsets, strip_counts;

    auto type_size = [](std::uint16_t type) -> std::size_t {
        switch (type) {
            case 1: case 2: case 6: case 7: return 1;
            case 3: case 8: return 2;
            case 4: case 9: case 11: return 4;
            default: return 0;
        }
    };

    for (std::uint16_t i = 0; i < n_entries; ++i) {
        std::size_t e = ifd + 2 + 12 * static_cast<std::size_t>(i);
        std::uint16_t tag = t.u16(e), type = t.u16(e + 2);
        std::uint32_t count = t.u32(e + 4);
        std::size_t tsz = type_size(type);
        if (tsz == 0) continue;
        std::size_t val_off = (tsz * count <= 4) ? e + 8 : t.u32(e + 8);
        auto value_at = [&](std::uint32_t idx) -> std::uint32_t {
            std::size_t o = val_off + tsz * idx;
            return (type == 3) ? t.u16(o) : t.u32(o);
        };
        switch (tag) {
            case 256: width = value_at(0); break;
            case 257: height = value_at(0); break;
            case 258: bits = value_at(0); break;
            case 259: compression = value_at(0); break;
            case 262: photometric = value_at(0); break;
            case 273:
                for (std::uint32_t j = 0; j < count; ++j) strip_offsets.push_back(value_at(j));
                break;
            case 277: samples = value_at(0); break;
            case 278: rows_per_strip = value_at(0); break;
            case 279:
                for (std::uint32_t j = 0; j < count; ++j) strip_counts.push_back(value_at(j));
                break;
            default: break;
        }
    }

    if (width == 0 || height == 0 || strip_offsets.empty())
        fail(Errc::malformed_image, "tiff: missing required tags");
    if (compression != 1) fail(Errc::unsupported_format, "tiff: only uncompressed supported");
    if (samples != 1) fail(Errc::unsupported_format, "tiff: only single-sample grayscale supported");
    if (photometric > 1) fail(Errc::unsupported_format, "tiff: only grayscale photometrics supported");
    if (bits != 8 && bits != 16) fail(Errc::unsupported_format, "tiff: only 8/16-bit supported");
    if (rows_per_strip == 0xFFFFFFFF) rows_per_strip = height;
    if (strip_counts.size() != strip_offsets.size())
        fail(Errc::malformed_image, "tiff: strip tables disagree");

    std::size_t bpp = bits / 8;
    std::size_t row_bytes = static_cast<std::size_t>(width) * bpp;
    std::vector<std::uint8_t> raster;
    raster.reserve(row_bytes * height);
    for (std::size_t s = 0; s < strip_offsets.size(); ++s) {
        std::size_t off = strip_offsets[s], cnt = strip_counts[s];
        if (off + cnt > bytes.size()) fail(Errc::malformed_image, "tiff: strip out of range");
        raster.insert(raster.end(), bytes.begin() + off, bytes.begin() + off + cnt);
    }
    if (raster.size() < row_bytes * height) fail(Errc::malformed_image, "tiff: truncated raster");

    double maxval = (bits == 8) ? 255.0 : 65535.0;
    Image img(static_cast<int>(width), static_cast<int>(height));
    for (std::uint32_t y = 0; y < height; ++y) {
        for (std::uint32_t x = 0; x < width; ++x) {
            std::size_t o = y * row_bytes + x * bpp;
            double v;
            if (bits == 8) {
                v = raster[o];
            } else {
                v = t.le ? (raster[o] | (raster[o + 1] << 8))
                         : ((raster[o] << 8) | raster[o + 1]);
            }
            v /= maxval;
            if (photometric == 0) v = 1.0 - v; // white-is-zero
            img.at(static_cast<int>(x), static_cast<int>(y)) = v;
        }
    }
    return img;
}

// ---- PNG via libpng ----

struct PngMemReader {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t off;
};

inline void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* r = static_cast<PngMemReader*>(png_get_io_ptr(png));
    if (r->off + n > r->size) {
        png_error(png, "read past end of buffer");
        return;
    }
    std::memcpy(out, r->data + r->off, n);
    r->off += n;
}

inline Image decode_png_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        fail(Errc::malformed_image, "png: missing signature");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(Errc::io_error, "png: failed to allocate read struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(Errc::io_error, "png: failed to allocate info struct");
    }

    PngMemReader reader{bytes.data(), bytes.size(), 0};
    std::vector<std::uint8_t> raster;
    std::vector<png_bytep> rows;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(Errc::malformed_image, "png: decode failed");
    }

    png_set_read_fn(png, &reader, &png_mem_read);
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);
    int channels = png_get_channels(png, info);
    std::size_t row_bytes = png_get_rowbytes(png, info);

    raster.resize(row_bytes * h);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = raster.data() + y * row_bytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels != 1 && channels != 3)
        fail(Errc::unsupported_format, "png: unexpected channel count after transforms");

    double maxval = (bit_depth == 16) ? 65535.0 : 255.0;
    Image img(static_cast<int>(w), static_cast<int>(h));
    for (png_uint_32 y = 0; y < h; ++y) {
        const std::uint8_t* row = raster.data() + y * row_bytes;
        for (png_uint_32 x = 0; x < w; ++x) {
            auto sample = [&](int c) -> double {
                std::size_t o = (static_cast<std::size_t>(x) * channels + c) * (bit_depth / 8);
                if (bit_depth == 16) return ((row[o] << 8) | row[o + 1]) / maxval; // network order
                return row[o] / maxval;
            };
            double v = (channels == 1) ? sample(0)
                                       : luminance(sample(0), sample(1), sample(2));
            img.at(static_cast<int>(x), static_cast<int>(y)) = v;
        }
    }
    return img;
}

inline ImageFormat sniff_format(std::span<const std::uint8_t> b) {
    if (b.size() >= 8 && png_sig_cmp(b.data(), 0, 8) == 0) return ImageFormat::png;
    if (b.size() >= 2 && b[0] == 'B' && b[1] == 'M') return ImageFormat::bmp;
    if (b.size() >= 4 && ((b[0] == 'I' && b[1] == 'I' && b[2] == 42 && b[3] == 0)
                          || (b[0] == 'M' && b[1] == 'M' && b[2] == 0 && b[3] == 42)))
        return ImageFormat::tiff;
    if (b.size() >= 2 && b[0] == 'P' && (b[1] == '2' || b[1] == '5' || b[1] == '6'))
        return ImageFormat::pgm;
    fail(Errc::unsupported_format, "unrecognized image magic");
}

} // namespace detail

/// Decode encoded image bytes to a grayscale raster in [0,1]. Color inputs
/// are reduced with the fixed 0.299/0.587/0.114 weights.
inline Image decode_image(std::span<const std::uint8_t> bytes,
                          ImageFormat format = ImageFormat::auto_detect) {
    if (format == ImageFormat::auto_detect) format = detail::sniff_format(bytes);
    switch (format) {
        case ImageFormat::png: return detail::decode_png_bytes(bytes);
        case ImageFormat::pgm: return detail::decode_pnm(bytes);
        case ImageFormat::bmp: return detail::decode_bmp(bytes);
        case ImageFormat::tiff: return detail::decode_tiff(bytes);
        default: fail(Errc::unsupported_format, "unknown format tag");
    }
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::missing_file, path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) fail(Errc::io_error, "failed reading " + path);
    return bytes;
}

inline Image load_image(const std::string& path, ImageFormat format = ImageFormat::auto_detect) {
    return decode_image(read_file_bytes(path), format);
}

/// Bilinear resize with pixel-center alignment; exact identity when the
/// target shape equals the source shape. Sample positions are clamped to
/// the source rectangle, so outputs stay inside the input value range.
inline Image resize(const Image& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) fail(Errc::dimension_mismatch, "resize: target must be positive");
    if (out_w == img.width && out_h == img.height) return img;

    Image out(out_w, out_h);
    double sx_scale = static_cast<double>(img.width) / out_w;
    double sy_scale = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        double sy = std::clamp((y + 0.5) * sy_scale - 0.5, 0.0, static_cast<double>(img.height - 1));
        int y0 = static_cast<int>(sy);
        int y1 = std::min(y0 + 1, img.height - 1);
        double fy = sy - y0;
        for (int x = 0; x < out_w; ++x) {
            double sx = std::clamp((x + 0.5) * sx_scale - 0.5, 0.0, static_cast<double>(img.width - 1));
            int x0 = static_cast<int>(sx);
            int x1 = std::min(x0 + 1, img.width - 1);
            double fx = sx - x0;
            double top = img.at(x0, y0) * (1.0 - fx) + img.at(x1, y0) * fx;
            double bot = img.at(x0, y1) * (1.0 - fx) + img.at(x1, y1) * fx;
            out.at(x, y) = top * (1.0 - fy) + bot * fy;
        }
    }
    return out;
}

/// Square an image to side x side. Aspect ratio is intentionally discarded:
/// fixed-length descriptors need fixed geometry downstream.
inline Image normalize_input(const Image& img, int side = 128) {
    return resize(img, side, side);
}

/// 8-bit binary PGM writer (thumbnails, sinogram dumps, synthetic data).
inline void write_pgm(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::io_error, "cannot open for writing: " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double v = std::clamp(img.at(x, y), 0.0, 1.0);
            row[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
    if (!out) fail(Errc::io_error, "failed writing " + path);
}

} // namespace gabrad
