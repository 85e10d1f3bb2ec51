#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "gabrad/bitvec.hpp"
#include "gabrad/errors.hpp"

namespace gabrad {

struct IndexRecord {
    std::string id;
    BitVec code;
};

struct IndexInput {
    std::string id;
    std::string label;
    BitVec code;
};

struct QueryHit {
    std::string id;
    std::size_t distance = 0;
};

struct QueryStats {
    std::size_t scanned = 0;
};

/// Immutable class-partitioned barcode index. Records keep manifest order
/// inside each bucket; that order is the final tie-break for equal
/// distances. The fingerprint pins the extraction parameters the codes were
/// built with, so cross-parameter comparisons fail loudly.
class ClassIndex {
public:
    ClassIndex() = default;
    ClassIndex(std::size_t code_len_bits, std::uint64_t fingerprint)
        : code_len_bits_(code_len_bits), fingerprint_(fingerprint) {}

    std::size_t code_len_bits() const { return code_len_bits_; }
    std::uint64_t fingerprint() const { return fingerprint_; }
    const std::map<std::string, std::vector<IndexRecord>>& buckets() const { return buckets_; }

    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& [_, bucket] : buckets_) n += bucket.size();
        return n;
    }

    /// k nearest stored codes inside the predicted class's bucket, ascending
    /// by (Hamming distance, bucket position). Returns fewer than k hits
    /// when the bucket is smaller; never looks at any other bucket.
    std::vector<QueryHit> query(const std::string& predicted_class, const BitVec& code,
                                std::size_t k, QueryStats* stats = nullptr) const {
        if (k < 1) fail(Errc::dimension_mismatch, "query: k must be >= 1");
        if (code.size() != code_len_bits_)
            fail(Errc::length_mismatch, "query: code length differs from index");
        auto it = buckets_.find(predicted_class);
        if (it == buckets_.end())
            fail(Errc::unknown_class, "query: predicted class '" + predicted_class
                                          + "' is not in the index");
        const std::vector<IndexRecord>& bucket = it->second;

        std::vector<std::pair<std::size_t, std::size_t>> dist_pos;
        dist_pos.reserve(bucket.size());
        for (std::size_t pos = 0; pos < bucket.size(); ++pos)
            dist_pos.emplace_back(hamming(bucket[pos].code, code), pos);
        if (stats) stats->scanned = bucket.size();

        std::size_t take = std::min(k, dist_pos.size());
        std::partial_sort(dist_pos.begin(), dist_pos.begin() + static_cast<std::ptrdiff_t>(take),
                          dist_pos.end());

        std::vector<QueryHit> hits;
        hits.reserve(take);
        for (std::size_t i = 0; i < take; ++i)
            hits.push_back({bucket[dist_pos[i].second].id, dist_pos[i].first});
        return hits;
    }

    friend ClassIndex build_index(const std::vector<IndexInput>&, std::uint64_t);

private:
    std::size_t code_len_bits_ = 0;
    std::uint64_t fingerprint_ = 0;
    std::map<std::string, std::vector<IndexRecord>> buckets_;
};

/// Partition records by class label, preserving input order within each
/// bucket. All codes must share one length and ids must be unique.
inline ClassIndex build_index(const std::vector<IndexInput>& records, std::uint64_t fingerprint) {
    std::size_t code_len = records.empty() ? 0 : records[0].code.size();
    ClassIndex index(code_len, fingerprint);

    std::unordered_set<std::string> seen_ids;
    seen_ids.reserve(records.size());
    for (const IndexInput& rec : records) {
        if (rec.code.size() != code_len)
            fail(Errc::length_mismatch, "build_index: record '" + rec.id
                                            + "' has a different code length");
        if (!seen_ids.insert(rec.id).second)
            fail(Errc::duplicate_id, "build_index: duplicate image id '" + rec.id + "'");
        index.buckets_[rec.label].push_back({rec.id, rec.code});
    }
    return index;
}

} // namespace gabrad
