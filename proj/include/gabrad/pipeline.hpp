#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gabrad/config.hpp"
#include "gabrad/gabor.hpp"
#include "gabrad/image.hpp"
#include "gabrad/io.hpp"
#include "gabrad/irma.hpp"
#include "gabrad/parallel.hpp"
#include "gabrad/retrieval.hpp"
#include "gabrad/svm.hpp"

namespace gabrad {

/// Resolve a manifest-relative path against the manifest's directory.
inline std::string resolve_manifest_path(const std::string& manifest_path,
                                         const std::string& relative) {
    std::filesystem::path rel(relative);
    if (rel.is_absolute()) return relative;
    return (std::filesystem::path(manifest_path).parent_path() / rel).string();
}

/// Normalize + extract for one decoded image under the active config.
inline GaborRadonFeatures extract_for_image(const Image& raw, const PipelineConfig& cfg,
                                            const GaborBank& bank) {
    Image norm = normalize_input(raw, cfg.image_side);
    return extract_gabor_radon(norm, bank, cfg.extract_options());
}

struct ExtractedRecord {
    std::string id;
    IrmaCode code;
    GaborRadonFeatures features;
    bool failed = false;
    std::string error;
};

/// Extract every categorized manifest record, in manifest order, fanning
/// out across workers. Failures are captured per record instead of
/// aborting the batch.
inline std::vector<ExtractedRecord> extract_manifest(const Manifest& manifest,
                                                     const std::string& manifest_path,
                                                     const PipelineConfig& cfg,
                                                     const GaborBank& bank) {
    std::vector<const ManifestRecord*> todo;
    for (const auto& rec : manifest.records)
        if (rec.code) todo.push_back(&rec);

    std::vector<ExtractedRecord> out(todo.size());
    parallel_for(todo.size(), cfg.workers, [&](std::size_t i) {
        const ManifestRecord& rec = *todo[i];
        out[i].id = rec.id;
        out[i].code = *rec.code;
        try {
            Image raw = load_image(resolve_manifest_path(manifest_path, rec.path));
            out[i].features = extract_for_image(raw, cfg, bank);
        } catch (const std::exception& e) {
            out[i].failed = true;
            out[i].error = e.what();
        }
    });
    return out;
}

/// Labels features by joining feature-file ids against the manifest's
/// codes; the class label of a record is its canonical 13-char code.
inline std::vector<LabeledSample> label_features(const FeatureFile& features,
                                                 const Manifest& manifest) {
    std::map<std::string, std::string> code_of;
    for (const auto& rec : manifest.records)
        if (rec.code) code_of[rec.id] = rec.code->raw;

    std::vector<LabeledSample> out;
    out.reserve(features.records.size());
    for (const auto& rec : features.records) {
        auto it = code_of.find(rec.id);
        if (it == code_of.end())
            fail(Errc::unknown_class, "feature id '" + rec.id + "' is not in the manifest");
        LabeledSample s;
        s.label = it->second;
        s.features.assign(rec.values.begin(), rec.values.end());
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace gabrad
