#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gabrad/bitvec.hpp"
#include "gabrad/config.hpp"
#include "gabrad/errors.hpp"
#include "gabrad/retrieval.hpp"
#include "gabrad/svm.hpp"

// Binary artifact formats, little-endian throughout, strings length-prefixed
// with u32:
//   GRF1: magic, u32 version, u32 U,V,d1,d2,n_angles, u64 vector_dim,
//         u64 record_count, then {id, vector_dim f32} per record
//   GRB1: same header, then {id, ceil(vector_dim/8) bytes, LSB-first bits}
//   SVM1: magic, kernel spec (u8 kind, f64 gamma, u32 degree, f64 coef0),
//         u32 k, k labels, u64 dim, dim (f64 min, f64 max) scaling pairs,
//         u64 binary count, then per binary {u32 pair_a, u32 pair_b,
//         u64 sv_count, sv_count*dim f32, sv_count f64 alphas, f64 bias}
//   IDX1: magic, u64 code_len_bits, u32 class_count, u64 fingerprint, then
//         per class {label, u64 record_count, {id, packed code bytes}}

namespace gabrad {

namespace detail {

class BinWriter {
public:
    explicit BinWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
        if (!out_) fail(Errc::io_error, "cannot open for writing: " + path);
    }

    void u8(std::uint8_t v) { raw(&v, 1); }
    void u32(std::uint32_t v) {
        std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                             static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
        raw(b, 4);
    }
    void u64(std::uint64_t v) {
        std::uint8_t b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
        raw(b, 8);
    }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
    void magic(const char m[5]) { raw(m, 4); }
    void raw(const void* p, std::size_t n) {
        out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }

    std::streampos tell() { return out_.tellp(); }
    void seek(std::streampos pos) { out_.seekp(pos); }

    void close() {
        out_.flush();
        if (!out_) fail(Errc::io_error, "failed writing " + path_);
        out_.close();
    }

private:
    std::ofstream out_;
    std::string path_;
};

class BinReader {
public:
    explicit BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) fail(Errc::missing_file, path);
    }

    std::uint8_t u8() {
        std::uint8_t v;
        raw(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        std::uint8_t b[4];
        raw(b, 4);
        return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }
    std::uint64_t u64() {
        std::uint8_t b[8];
        raw(b, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }
    float f32() {
        std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::string str() {
        std::uint32_t n = u32();
        if (n > (1u << 20)) fail(Errc::io_error, path_ + ": unreasonable string length");
        std::string s(n, '\0');
        raw(s.data(), n);
        return s;
    }
    void expect_magic(const char m[5], const char* what) {
        char got[5] = {0, 0, 0, 0, 0};
        raw(got, 4);
        if (std::memcmp(got, m, 4) != 0)
            fail(Errc::io_error, path_ + ": not a " + what + " file (bad magic)");
    }
    void raw(void* p, std::size_t n) {
        in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (in_.gcount() != static_cast<std::streamsize>(n))
            fail(Errc::io_error, path_ + ": truncated file");
    }
    bool at_eof() { return in_.peek() == std::ifstream::traits_type::eof(); }

private:
    std::ifstream in_;
    std::string path_;
};

} // namespace detail

struct DescriptorHeader {
    std::uint32_t version = 1;
    std::uint32_t scales = 0, orients = 0, d1 = 0, d2 = 0, n_angles = 0;
    std::uint64_t vector_dim = 0;
    std::uint64_t record_count = 0;

    static DescriptorHeader from_config(const PipelineConfig& cfg) {
        DescriptorHeader h;
        h.scales = static_cast<std::uint32_t>(cfg.gabor.n_scales);
        h.orients = static_cast<std::uint32_t>(cfg.gabor.n_orients);
        h.d1 = static_cast<std::uint32_t>(cfg.d1);
        h.d2 = static_cast<std::uint32_t>(cfg.d2);
        h.n_angles = static_cast<std::uint32_t>(cfg.n_angles);
        h.vector_dim = static_cast<std::uint64_t>(cfg.vector_dim());
        return h;
    }

    /// Fingerprint discipline for descriptor files: the recorded extraction
    /// parameters must match the active config exactly.
    void check_matches(const PipelineConfig& cfg, const std::string& file) const {
        DescriptorHeader want = from_config(cfg);
        if (scales != want.scales || orients != want.orients || d1 != want.d1 || d2 != want.d2
            || n_angles != want.n_angles || vector_dim != want.vector_dim)
            fail(Errc::fingerprint_mismatch,
                 file + " was extracted under different parameters than the active config");
    }
};

/// Streams GRF records to disk; the record count is patched on close.
class FeatureFileWriter {
public:
    FeatureFileWriter(const std::string& path, const DescriptorHeader& header)
        : writer_(path), header_(header) {
        writer_.magic("GRF1");
        writer_.u32(header_.version);
        writer_.u32(header_.scales);
        writer_.u32(header_.orients);
        writer_.u32(header_.d1);
        writer_.u32(header_.d2);
        writer_.u32(header_.n_angles);
        writer_.u64(header_.vector_dim);
        count_pos_ = writer_.tell();
        writer_.u64(0);
    }

    void add(const std::string& id, std::span<const double> grf) {
        if (grf.size() != header_.vector_dim)
            fail(Errc::dimension_mismatch, "feature record has wrong length");
        writer_.str(id);
        for (double v : grf) writer_.f32(static_cast<float>(v));
        ++count_;
    }

    void close() {
        auto end = writer_.tell();
        writer_.seek(count_pos_);
        writer_.u64(count_);
        writer_.seek(end);
        writer_.close();
    }

private:
    detail::BinWriter writer_;
    DescriptorHeader header_;
    std::streampos count_pos_;
    std::uint64_t count_ = 0;
};

struct FeatureRecord {
    std::string id;
    std::vector<float> values;
};

struct FeatureFile {
    DescriptorHeader header;
    std::vector<FeatureRecord> records;
};

inline FeatureFile read_feature_file(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("GRF1", "feature");
    FeatureFile f;
    f.header.version = r.u32();
    f.header.scales = r.u32();
    f.header.orients = r.u32();
    f.header.d1 = r.u32();
    f.header.d2 = r.u32();
    f.header.n_angles = r.u32();
    f.header.vector_dim = r.u64();
    f.header.record_count = r.u64();
    f.records.resize(f.header.record_count);
    for (auto& rec : f.records) {
        rec.id = r.str();
        rec.values.resize(f.header.vector_dim);
        for (auto& v : rec.values) v = r.f32();
    }
    return f;
}

/// Streams GRBF records (packed LSB-first) to disk.
class BarcodeFileWriter {
public:
    BarcodeFileWriter(const std::string& path, const DescriptorHeader& header)
        : writer_(path), header_(header) {
        writer_.magic("GRB1");
        writer_.u32(header_.version);
        writer_.u32(header_.scales);
        writer_.u32(header_.orients);
        writer_.u32(header_.d1);
        writer_.u32(header_.d2);
        writer_.u32(header_.n_angles);
        writer_.u64(header_.vector_dim);
        count_pos_ = writer_.tell();
        writer_.u64(0);
    }

    void add(const std::string& id, const BitVec& code) {
        if (code.size() != header_.vector_dim)
            fail(Errc::dimension_mismatch, "barcode record has wrong length");
        writer_.str(id);
        auto bytes = code.to_bytes();
        writer_.raw(bytes.data(), bytes.size());
        ++count_;
    }

    void close() {
        auto end = writer_.tell();
        writer_.seek(count_pos_);
        writer_.u64(count_);
        writer_.seek(end);
        writer_.close();
    }

private:
    detail::BinWriter writer_;
    DescriptorHeader header_;
    std::streampos count_pos_;
    std::uint64_t count_ = 0;
};

struct BarcodeRecord {
    std::string id;
    BitVec code;
};

struct BarcodeFile {
    DescriptorHeader header;
    std::vector<BarcodeRecord> records;
};

inline BarcodeFile read_barcode_file(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("GRB1", "barcode");
    BarcodeFile f;
    f.header.version = r.u32();
    f.header.scales = r.u32();
    f.header.orients = r.u32();
    f.header.d1 = r.u32();
    f.header.d2 = r.u32();
    f.header.n_angles = r.u32();
    f.header.vector_dim = r.u64();
    f.header.record_count = r.u64();
    std::size_t n_bytes = (f.header.vector_dim + 7) / 8;
    std::vector<std::uint8_t> buf(n_bytes);
    f.records.resize(f.header.record_count);
    for (auto& rec : f.records) {
        rec.id = r.str();
        r.raw(buf.data(), buf.size());
        rec.code = BitVec::from_bytes(f.header.vector_dim, buf);
    }
    return f;
}

inline void write_model_file(const std::string& path, const MulticlassModel& model) {
    detail::BinWriter w(path);
    w.magic("SVM1");
    w.u8(static_cast<std::uint8_t>(model.kernel.kind));
    w.f64(model.kernel.gamma);
    w.u32(static_cast<std::uint32_t>(model.kernel.degree));
    w.f64(model.kernel.coef0);
    w.u32(static_cast<std::uint32_t>(model.classes.size()));
    for (const auto& label : model.classes) w.str(label);
    w.u64(model.scaling.size());
    for (auto [lo, hi] : model.scaling) {
        w.f64(lo);
        w.f64(hi);
    }
    w.u64(model.binaries.size());
    for (const BinaryModel& bin : model.binaries) {
        w.u32(static_cast<std::uint32_t>(bin.pair_a));
        w.u32(static_cast<std::uint32_t>(bin.pair_b));
        w.u64(bin.support_vectors.rows);
        for (double v : bin.support_vectors.data) w.f32(static_cast<float>(v));
        for (double a : bin.alphas) w.f64(a);
        w.f64(bin.bias);
    }
    w.close();
}

inline MulticlassModel read_model_file(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("SVM1", "model");
    MulticlassModel model;
    model.kernel.kind = static_cast<KernelKind>(r.u8());
    model.kernel.gamma = r.f64();
    model.kernel.degree = static_cast<int>(r.u32());
    model.kernel.coef0 = r.f64();
    std::uint32_t k = r.u32();
    model.classes.resize(k);
    for (auto& label : model.classes) label = r.str();
    std::uint64_t dim = r.u64();
    model.scaling.resize(dim);
    for (auto& [lo, hi] : model.scaling) {
        lo = r.f64();
        hi = r.f64();
    }
    std::uint64_t n_bin = r.u64();
    model.binaries.resize(n_bin);
    for (auto& bin : model.binaries) {
        bin.pair_a = static_cast<int>(r.u32());
        bin.pair_b = static_cast<int>(r.u32());
        std::uint64_t sv_count = r.u64();
        bin.support_vectors.rows = sv_count;
        bin.support_vectors.dim = dim;
        bin.support_vectors.data.resize(sv_count * dim);
        for (auto& v : bin.support_vectors.data) v = r.f32();
        bin.alphas.resize(sv_count);
        for (auto& a : bin.alphas) a = r.f64();
        bin.bias = r.f64();
    }
    return model;
}

inline void write_index_file(const std::string& path, const ClassIndex& index) {
    detail::BinWriter w(path);
    w.magic("IDX1");
    w.u64(index.code_len_bits());
    w.u32(static_cast<std::uint32_t>(index.buckets().size()));
    w.u64(index.fingerprint());
    for (const auto& [label, bucket] : index.buckets()) {
        w.str(label);
        w.u64(bucket.size());
        for (const IndexRecord& rec : bucket) {
            w.str(rec.id);
            auto bytes = rec.code.to_bytes();
            w.raw(bytes.data(), bytes.size());
        }
    }
    w.close();
}

inline ClassIndex read_index_file(const std::string& path) {
    detail::BinReader r(path);
    r.expect_magic("IDX1", "index");
    std::uint64_t code_len = r.u64();
    std::uint32_t n_classes = r.u32();
    std::uint64_t fingerprint = r.u64();
    std::size_t n_bytes = (code_len + 7) / 8;
    std::vector<std::uint8_t> buf(n_bytes);
    std::vector<IndexInput> records;
    for (std::uint32_t c = 0; c < n_classes; ++c) {
        std::string label = r.str();
        std::uint64_t count = r.u64();
        for (std::uint64_t i = 0; i < count; ++i) {
            IndexInput rec;
            rec.id = r.str();
            rec.label = label;
            r.raw(buf.data(), buf.size());
            rec.code = BitVec::from_bytes(code_len, buf);
            records.push_back(std::move(rec));
        }
    }
    if (records.empty()) return ClassIndex(code_len, fingerprint);
    return build_index(records, fingerprint);
}

} // namespace gabrad
