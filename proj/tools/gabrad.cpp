// gabrad command line: extraction, training, indexing, querying, evaluation,
// synthetic fixtures and parameter sweeps over one shared pipeline config.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 artifact mismatch.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gabrad/gabrad.hpp"

namespace {

using namespace gabrad;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> sets; // raw key=value overrides, in flag order
    int workers_flag = -1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value config file");
        cmd->add_option("--set", sets, "override a config key, e.g. --set n_angles=16")
            ->take_all();
        cmd->add_option("--workers", workers_flag, "worker thread count (default: $GABRAD_WORKERS or 1)");
    }

    PipelineConfig resolve() const {
        PipelineConfig cfg = config_path.empty() ? PipelineConfig{}
                                                 : PipelineConfig::from_file(config_path);
        for (const std::string& kv : sets) {
            std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                fail(Errc::malformed_row, "--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (workers_flag > 0) {
            cfg.workers = workers_flag;
        } else if (const char* env = std::getenv("GABRAD_WORKERS")) {
            cfg.workers = std::max(1, std::atoi(env));
        }
        return cfg;
    }
};

void print_provenance(const PipelineConfig& cfg) {
    std::cout << "--- configuration ---\n";
    cfg.print(std::cout);
    std::cout << "---------------------\n";
}

// ---- extract ----

int run_extract(const ConfigArgs& cargs, const std::string& manifest_path,
                const std::string& out_features, const std::string& out_barcodes) {
    PipelineConfig cfg = cargs.resolve();
    print_provenance(cfg);

    Manifest manifest = load_manifest(manifest_path, "train");
    std::cout << "manifest records=" << manifest.records.size()
              << " categorized=" << manifest.categorized()
              << " uncategorized=" << manifest.records.size() - manifest.categorized() << "\n";
    if (manifest.categorized() == 0)
        std::cout << "warning: manifest has no categorized records; writing empty outputs\n";

    GaborBank bank = build_bank(cfg.gabor);
    auto start = Clock::now();
    std::vector<ExtractedRecord> extracted = extract_manifest(manifest, manifest_path, cfg, bank);
    double elapsed = seconds_since(start);

    DescriptorHeader header = DescriptorHeader::from_config(cfg);
    FeatureFileWriter features(out_features, header);
    BarcodeFileWriter barcodes(out_barcodes, header);
    std::size_t failures = 0;
    for (const ExtractedRecord& rec : extracted) {
        if (rec.failed) {
            ++failures;
            std::cerr << "error: " << rec.id << ": " << rec.error << " (skipped)\n";
            continue;
        }
        features.add(rec.id, rec.features.grf);
        barcodes.add(rec.id, rec.features.grbf);
    }
    features.close();
    barcodes.close();

    std::size_t written = extracted.size() - failures;
    std::cout << "extracted=" << written << " failed=" << failures << " elapsed=" << elapsed
              << "s throughput=" << (elapsed > 0 ? written / elapsed : 0.0) << " images/s\n"
              << "features=" << out_features << "\nbarcodes=" << out_barcodes << "\n";
    return failures == 0 ? 0 : 2;
}

// ---- train ----

int run_train(const ConfigArgs& cargs, const std::string& features_path,
              const std::string& manifest_path, const std::string& out_model, bool do_grid) {
    PipelineConfig cfg = cargs.resolve();
    print_provenance(cfg);

    FeatureFile features = read_feature_file(features_path);
    features.header.check_matches(cfg, features_path);
    Manifest manifest = load_manifest(manifest_path, "train");
    std::vector<LabeledSample> data = label_features(features, manifest);

    std::map<std::string, std::size_t> per_class;
    for (const auto& s : data) ++per_class[s.label];
    std::cout << "training samples=" << data.size() << " classes=" << per_class.size() << "\n";
    for (const auto& [label, count] : per_class)
        std::cout << "class " << label << " n=" << count << "\n";

    KernelSpec spec = cfg.kernel_spec();
    double c = cfg.svm_c;
    if (do_grid) {
        double vd = static_cast<double>(cfg.vector_dim());
        std::vector<double> cs{1.0, 8.0, 32.0, 128.0};
        std::vector<double> gammas{0.25 / vd, 1.0 / vd, 4.0 / vd};
        auto start = Clock::now();
        GridSearchResult best = grid_search(data, cfg.kernel, cs, gammas, 5, cfg.seed,
                                            cfg.tol, cfg.max_passes, cfg.scale_features);
        std::cout << "grid-search best C=" << best.c << " gamma=" << best.gamma
                  << " cv_accuracy=" << best.cv_accuracy
                  << " elapsed=" << seconds_since(start) << "s\n";
        c = best.c;
        spec.gamma = best.gamma;
    }

    auto start = Clock::now();
    MulticlassModel model = train_multiclass(data, spec, c, cfg.tol, cfg.max_passes,
                                             cfg.scale_features, cfg.workers);
    std::cout << "binaries=" << model.binaries.size() << " elapsed=" << seconds_since(start)
              << "s\n";
    write_model_file(out_model, model);
    std::cout << "model=" << out_model << "\n";
    return 0;
}

// ---- build-index ----

int run_build_index(const ConfigArgs& cargs, const std::string& barcodes_path,
                    const std::string& manifest_path, const std::string& out_index) {
    PipelineConfig cfg = cargs.resolve();
    print_provenance(cfg);

    BarcodeFile barcodes = read_barcode_file(barcodes_path);
    barcodes.header.check_matches(cfg, barcodes_path);
    Manifest manifest = load_manifest(manifest_path, "train");

    std::map<std::string, std::string> code_of;
    for (const auto& rec : manifest.records)
        if (rec.code) code_of[rec.id] = rec.code->raw;

    std::vector<IndexInput> records;
    records.reserve(barcodes.records.size());
    for (auto& rec : barcodes.records) {
        auto it = code_of.find(rec.id);
        if (it == code_of.end())
            fail(Errc::unknown_class, "barcode id '" + rec.id + "' is not in the manifest");
        records.push_back({rec.id, it->second, std::move(rec.code)});
    }

    ClassIndex index = build_index(records, cfg.fingerprint());
    write_index_file(out_index, index);
    std::cout << "indexed=" << index.size() << " classes=" << index.buckets().size()
              << "\nindex=" << out_index << "\n";
    return 0;
}

// ---- shared query/evaluate plumbing ----

struct LoadedArtifacts {
    MulticlassModel model;
    ClassIndex index;
    GaborBank bank;
};

LoadedArtifacts load_artifacts(const PipelineConfig& cfg, const std::string& model_path,
                               const std::string& index_path) {
    LoadedArtifacts art;
    art.model = read_model_file(model_path);
    art.index = read_index_file(index_path);
    auto vd = static_cast<std::size_t>(cfg.vector_dim());
    if (art.model.dim() != vd)
        fail(Errc::fingerprint_mismatch, model_path + ": model dimension "
                                             + std::to_string(art.model.dim())
                                             + " does not match config vector_dim "
                                             + std::to_string(vd));
    if (art.index.code_len_bits() != vd)
        fail(Errc::fingerprint_mismatch, index_path + ": code length does not match config");
    if (art.index.fingerprint() != cfg.fingerprint())
        fail(Errc::fingerprint_mismatch, index_path + ": extraction fingerprint differs from config");
    art.bank = build_bank(cfg.gabor);
    return art;
}

Image thumbnail(const Image& img) { return normalize_input(img, 128); }

void write_contact_sheet(const std::string& out_path, const Image& query,
                         const std::vector<Image>& hits) {
    const int cell = 128, gap = 4;
    int n = 1 + static_cast<int>(hits.size());
    Image sheet(n * cell + (n - 1) * gap, cell, 1.0);
    auto blit = [&](const Image& tile, int x0) {
        Image t = thumbnail(tile);
        for (int y = 0; y < cell; ++y)
            for (int x = 0; x < cell; ++x) sheet.at(x0 + x, y) = t.at(x, y);
    };
    blit(query, 0);
    for (std::size_t i = 0; i < hits.size(); ++i)
        blit(hits[i], (static_cast<int>(i) + 1) * (cell + gap));
    write_pgm(sheet, out_path);
}

// ---- query ----

int run_query(const ConfigArgs& cargs, const std::string& image_path,
              const std::string& model_path, const std::string& index_path, int k_flag,
              const std::string& csv_path, const std::string& contact_sheet,
              const std::string& sheet_manifest, const std::string& dump_sinogram) {
    PipelineConfig cfg = cargs.resolve();
    print_provenance(cfg);
    LoadedArtifacts art = load_artifacts(cfg, model_path, index_path);
    int k = k_flag > 0 ? k_flag : cfg.knn;

    Image raw = load_image(image_path);
    Image norm = normalize_input(raw, cfg.image_side);
    if (!dump_sinogram.empty()) {
        Sinogram sino = radon_transform(norm, cfg.n_angles);
        double hi = 0.0;
        for (double v : sino.data) hi = std::max(hi, v);
        Image vis = sino.as_image();
        if (hi > 0.0)
            for (double& v : vis.pixels) v /= hi;
        write_pgm(vis, dump_sinogram);
        std::cout << "sinogram=" << dump_sinogram << "\n";
    }

    GaborRadonFeatures feat = extract_gabor_radon(norm, art.bank, cfg.extract_options());
    std::string predicted = predict(art.model, feat.grf);
    std::cout << "predicted_class=" << predicted << "\n";

    auto bucket = art.index.buckets().find(predicted);
    if (bucket != art.index.buckets().end()
        && static_cast<std::size_t>(k) > bucket->second.size())
        std::cerr << "warning: k=" << k << " exceeds bucket size " << bucket->second.size()
                  << "; returning the whole bucket\n";

    std::vector<QueryHit> hits = art.index.query(predicted, feat.grbf, static_cast<std::size_t>(k));
    for (std::size_t r = 0; r < hits.size(); ++r)
        std::cout << "rank=" << r + 1 << " id=" << hits[r].id
                  << " distance=" << hits[r].distance << "\n";

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) fail(Errc::io_error, "cannot write " + csv_path);
        csv << "rank,id,distance,predicted_class\n";
        for (std::size_t r = 0; r < hits.size(); ++r)
            csv << r + 1 << "," << hits[r].id << "," << hits[r].distance << "," << predicted
                << "\n";
    }

    if (!contact_sheet.empty()) {
        if (sheet_manifest.empty())
            fail(Errc::missing_file, "--contact-sheet needs --manifest to resolve image paths");
        Manifest manifest = load_manifest(sheet_manifest, "train");
        std::map<std::string, std::string> path_of;
        for (const auto& rec : manifest.records) path_of[rec.id] = rec.path;
        std::vector<Image> tiles;
        for (const auto& hit : hits) {
            auto it = path_of.find(hit.id);
            if (it == path_of.end())
                fail(Errc::unknown_class, "retrieved id '" + hit.id + "' is not in the manifest");
            tiles.push_back(load_image(resolve_manifest_path(sheet_manifest, it->second)));
        }
        write_contact_sheet(contact_sheet, raw, tiles);
        std::cout << "contact_sheet=" << contact_sheet << "\n";
    }
    return 0;
}

// ---- evaluate ----

struct EvalRow {
    std::string id;
    std::string truth;
    std::string predicted;
    std::string retrieved_id;
    std::string retrieved_code;
    double error = 0.0;
    bool correct = false;
};

struct EvalSummary {
    std::size_t total = 0, correct = 0;
    double accuracy = 0.0, e_total = 0.0;
    std::vector<EvalRow> rows;
};

EvalSummary evaluate_manifest(const PipelineConfig& cfg, const Manifest& manifest,
                              const std::string& manifest_path, const LoadedArtifacts& art,
                              std::ostream& log) {
    auto t0 = Clock::now();
    std::vector<ExtractedRecord> extracted = extract_manifest(manifest, manifest_path, cfg, art.bank);
    double t_extract = seconds_since(t0);
    for (const auto& rec : extracted)
        if (rec.failed) fail(Errc::io_error, rec.id + ": " + rec.error);

    std::vector<std::string> predictions(extracted.size());
    t0 = Clock::now();
    parallel_for(extracted.size(), cfg.workers, [&](std::size_t i) {
        predictions[i] = predict(art.model, extracted[i].features.grf);
    });
    double t_classify = seconds_since(t0);

    std::vector<QueryHit> first_hits(extracted.size());
    t0 = Clock::now();
    parallel_for(extracted.size(), cfg.workers, [&](std::size_t i) {
        auto hits = art.index.query(predictions[i], extracted[i].features.grbf, 1);
        if (hits.empty())
            fail(Errc::unknown_class, "empty bucket for class " + predictions[i]);
        first_hits[i] = hits[0];
    });
    double t_retrieve = seconds_since(t0);

    // branching factors from the union of test codes and the index's classes
    std::vector<IrmaCode> corpus;
    for (const auto& rec : extracted) corpus.push_back(rec.code);
    for (const auto& [label, bucket] : art.index.buckets()) corpus.push_back(parse_irma(label));
    AlphabetTable table = build_alphabets(corpus);

    EvalSummary summary;
    summary.total = extracted.size();
    ErrorOptions eopt = cfg.error_options();
    for (std::size_t i = 0; i < extracted.size(); ++i) {
        EvalRow row;
        row.id = extracted[i].id;
        row.truth = extracted[i].code.raw;
        row.predicted = predictions[i];
        row.retrieved_id = first_hits[i].id;
        row.retrieved_code = predictions[i]; // bucket members share the class code
        row.error = irma_error(extracted[i].code, parse_irma(row.retrieved_code), table, eopt);
        row.correct = row.predicted == row.truth;
        if (row.correct) ++summary.correct;
        summary.e_total += row.error;
        summary.rows.push_back(std::move(row));
    }
    summary.accuracy = summary.total > 0
                           ? static_cast<double>(summary.correct) / static_cast<double>(summary.total)
                           : 0.0;

    log << "timing extract=" << t_extract << "s classify=" << t_classify << "s retrieve="
        << t_retrieve << "s\n";
    return summary;
}

int run_evaluate(const ConfigArgs& cargs, const std::string& manifest_path,
                 const std::string& model_path, const std::string& index_path,
                 const std::string& csv_path) {
    PipelineConfig cfg = cargs.resolve();
    print_provenance(cfg);
    LoadedArtifacts art = load_artifacts(cfg, model_path, index_path);

    Manifest manifest = load_manifest(manifest_path, "test");
    std::cout << "test records=" << manifest.records.size() << " categorized="
              << manifest.categorized() << "\n";

    auto t0 = Clock::now();
    EvalSummary summary = evaluate_manifest(cfg, manifest, manifest_path, art, std::cout);

    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", summary.accuracy);
    std::cout << "queries=" << summary.total << "\ncorrect=" << summary.correct
              << "\naccuracy=" << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", summary.e_total);
    std::cout << "e_total=" << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.6f",
                  summary.total > 0 ? summary.e_total / static_cast<double>(summary.total) : 0.0);
    std::cout << "e_mean=" << buf << "\n";

    // per-class recall and the confusion pairs that actually occurred
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_class; // truth -> (n, correct)
    std::map<std::pair<std::string, std::string>, std::size_t> confusion;
    for (const auto& row : summary.rows) {
        auto& entry = per_class[row.truth];
        ++entry.first;
        if (row.correct) ++entry.second;
        else ++confusion[{row.truth, row.predicted}];
    }
    for (const auto& [label, counts] : per_class)
        std::cout << "class " << label << " n=" << counts.first << " correct=" << counts.second
                  << "\n";
    for (const auto& [pair, count] : confusion)
        std::cout << "confused " << pair.first << " -> " << pair.second << " n=" << count << "\n";
    std::cout << "total_elapsed=" << seconds_since(t0) << "s\n";

    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) fail(Errc::io_error, "cannot write " + csv_path);
        csv << "query_id,truth,predicted_class,retrieved_id,retrieved_code,error\n";
        char err[32];
        for (const auto& row : summary.rows) {
            std::snprintf(err, sizeof(err), "%.9f", row.error);
            csv << row.id << "," << row.truth << "," << row.predicted << "," << row.retrieved_id
                << "," << row.retrieved_code << "," << err << "\n";
        }
        std::cout << "csv=" << csv_path << "\n";
    }
    return 0;
}

// ---- synth ----

int run_synth(const std::string& out_dir, int classes, int per_class, int test_per_class,
              std::uint64_t seed, int image_side) {
    SynthOptions opt;
    opt.n_classes = classes;
    opt.train_per_class = per_class;
    opt.test_per_class = test_per_class;
    opt.seed = seed;
    opt.image_side = image_side;
    SynthResult result = generate_synthetic(out_dir, opt);
    std::cout << "images=" << result.images_written << "\ntrain_manifest="
              << result.train_manifest << "\ntest_manifest=" << result.test_manifest << "\n";
    return 0;
}

// ---- sweep ----

struct BankSpec {
    int scales = 0, orients = 0;
};

std::vector<BankSpec> parse_banks(const std::string& arg) {
    std::vector<BankSpec> banks;
    std::size_t pos = 0;
    while (pos < arg.size()) {
        std::size_t comma = arg.find(',', pos);
        std::string item = arg.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        std::size_t x = item.find('x');
        if (x == std::string::npos)
            fail(Errc::malformed_row, "bank spec must look like 4x5, got '" + item + "'");
        banks.push_back({std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1))});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return banks;
}

int run_sweep(const ConfigArgs& cargs, const std::string& train_path,
              const std::string& test_path, const std::string& out_csv,
              const std::string& banks_arg, const std::vector<int>& angle_list) {
    PipelineConfig base = cargs.resolve();
    std::vector<BankSpec> banks = parse_banks(banks_arg);

    Manifest train = load_manifest(train_path, "train");
    Manifest test = load_manifest(test_path, "test");
    std::cout << "train categorized=" << train.categorized() << " test categorized="
              << test.categorized() << "\n";

    std::ofstream csv(out_csv);
    if (!csv) fail(Errc::io_error, "cannot write " + out_csv);
    csv << "bank,scales,orients,n_p,vd,accuracy,e_total\n";

    for (const BankSpec& bank_spec : banks) {
        for (int n_p : angle_list) {
            PipelineConfig cfg = base;
            cfg.gabor.n_scales = bank_spec.scales;
            cfg.gabor.n_orients = bank_spec.orients;
            cfg.n_angles = n_p;
            cfg.svm_gamma = 0.0; // re-derive 1/VD per bank

            auto t0 = Clock::now();
            GaborBank bank = build_bank(cfg.gabor);
            std::vector<ExtractedRecord> train_recs =
                extract_manifest(train, train_path, cfg, bank);
            for (const auto& rec : train_recs)
                if (rec.failed) fail(Errc::io_error, rec.id + ": " + rec.error);

            std::vector<LabeledSample> samples;
            std::vector<IndexInput> index_records;
            for (const auto& rec : train_recs) {
                samples.push_back({rec.code.raw, rec.features.grf});
                index_records.push_back({rec.id, rec.code.raw, rec.features.grbf});
            }

            LoadedArtifacts art;
            art.model = train_multiclass(samples, cfg.kernel_spec(), cfg.svm_c, cfg.tol,
                                         cfg.max_passes, cfg.scale_features, cfg.workers);
            art.index = build_index(index_records, cfg.fingerprint());
            art.bank = std::move(bank);

            EvalSummary summary = evaluate_manifest(cfg, test, test_path, art, std::cout);

            char acc[32], err[32];
            std::snprintf(acc, sizeof(acc), "%.6f", summary.accuracy);
            std::snprintf(err, sizeof(err), "%.6f", summary.e_total);
            csv << "GBF(" << bank_spec.scales << "," << bank_spec.orients << ","
                << cfg.gabor.win_h << "," << cfg.gabor.win_w << ")," << bank_spec.scales << ","
                << bank_spec.orients << "," << n_p << "," << cfg.vector_dim() << "," << acc << ","
                << err << "\n";
            csv.flush();
            std::cout << "sweep bank=" << bank_spec.scales << "x" << bank_spec.orients
                      << " n_p=" << n_p << " vd=" << cfg.vector_dim() << " accuracy=" << acc
                      << " e_total=" << err << " elapsed=" << seconds_since(t0) << "s\n";
        }
    }
    std::cout << "csv=" << out_csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gabrad: two-stage image retrieval with Gabor-Radon barcodes"};
    app.require_subcommand(1);

    // extract
    auto* cmd_extract = app.add_subcommand("extract", "extract GRF/GRBF descriptors for a manifest");
    ConfigArgs extract_cfg;
    std::string extract_manifest_path, extract_features, extract_barcodes;
    extract_cfg.attach(cmd_extract);
    cmd_extract->add_option("--manifest", extract_manifest_path)->required();
    cmd_extract->add_option("--out-features", extract_features)->required();
    cmd_extract->add_option("--out-barcodes", extract_barcodes)->required();

    // train
    auto* cmd_train = app.add_subcommand("train", "train the one-against-one SVM on GRF features");
    ConfigArgs train_cfg;
    std::string train_features, train_manifest, train_model;
    bool train_grid = false;
    train_cfg.attach(cmd_train);
    cmd_train->add_option("--features", train_features)->required();
    cmd_train->add_option("--manifest", train_manifest)->required();
    cmd_train->add_option("--out-model", train_model)->required();
    cmd_train->add_flag("--grid-search", train_grid, "5-fold CV over C and gamma before training");

    // build-index
    auto* cmd_index = app.add_subcommand("build-index", "build the class-partitioned barcode index");
    ConfigArgs index_cfg;
    std::string index_barcodes, index_manifest, index_out;
    index_cfg.attach(cmd_index);
    cmd_index->add_option("--barcodes", index_barcodes)->required();
    cmd_index->add_option("--manifest", index_manifest)->required();
    cmd_index->add_option("--out-index", index_out)->required();

    // query
    auto* cmd_query = app.add_subcommand("query", "classify one image and retrieve neighbors");
    ConfigArgs query_cfg;
    std::string query_image, query_model, query_index, query_csv, query_sheet, query_sheet_manifest,
        query_sino;
    int query_k = -1;
    query_cfg.attach(cmd_query);
    cmd_query->add_option("--image", query_image)->required();
    cmd_query->add_option("--model", query_model)->required();
    cmd_query->add_option("--index", query_index)->required();
    cmd_query->add_option("--k", query_k, "neighbors to return (default: config k)");
    cmd_query->add_option("--csv", query_csv, "write ranked results as CSV");
    cmd_query->add_option("--contact-sheet", query_sheet, "write query+hits thumbnails as PGM");
    cmd_query->add_option("--manifest", query_sheet_manifest,
                          "manifest used to resolve retrieved image paths for --contact-sheet");
    cmd_query->add_option("--dump-sinogram", query_sino, "write the query sinogram as PGM");

    // evaluate
    auto* cmd_eval = app.add_subcommand("evaluate", "classify+retrieve a test manifest and score it");
    ConfigArgs eval_cfg;
    std::string eval_manifest, eval_model, eval_index, eval_csv;
    eval_cfg.attach(cmd_eval);
    cmd_eval->add_option("--manifest", eval_manifest)->required();
    cmd_eval->add_option("--model", eval_model)->required();
    cmd_eval->add_option("--index", eval_index)->required();
    cmd_eval->add_option("--csv", eval_csv, "write per-query detail CSV");

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    std::string synth_out;
    int synth_classes = 4, synth_per_class = 50, synth_test_per_class = 0, synth_side = 112;
    std::uint64_t synth_seed = 7;
    cmd_synth->add_option("--out", synth_out)->required();
    cmd_synth->add_option("--classes", synth_classes);
    cmd_synth->add_option("--per-class", synth_per_class, "training images per class");
    cmd_synth->add_option("--test-per-class", synth_test_per_class);
    cmd_synth->add_option("--seed", synth_seed);
    cmd_synth->add_option("--image-side", synth_side);

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "run the bank x n_p grid and emit a CSV");
    ConfigArgs sweep_cfg;
    std::string sweep_train, sweep_test, sweep_csv;
    std::string sweep_banks = "3x4,4x3,4x5,5x4,4x6,6x4,6x8,8x6";
    std::vector<int> sweep_angles{8, 16, 32};
    sweep_cfg.attach(cmd_sweep);
    cmd_sweep->add_option("--train-manifest", sweep_train)->required();
    cmd_sweep->add_option("--test-manifest", sweep_test)->required();
    cmd_sweep->add_option("--out-csv", sweep_csv)->required();
    cmd_sweep->add_option("--banks", sweep_banks, "comma-separated UxV bank list");
    cmd_sweep->add_option("--angles", sweep_angles, "projection counts to sweep")->take_all();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cmd_extract)
            return run_extract(extract_cfg, extract_manifest_path, extract_features,
                               extract_barcodes);
        if (*cmd_train)
            return run_train(train_cfg, train_features, train_manifest, train_model, train_grid);
        if (*cmd_index)
            return run_build_index(index_cfg, index_barcodes, index_manifest, index_out);
        if (*cmd_query)
            return run_query(query_cfg, query_image, query_model, query_index, query_k, query_csv,
                             query_sheet, query_sheet_manifest, query_sino);
        if (*cmd_eval)
            return run_evaluate(eval_cfg, eval_manifest, eval_model, eval_index, eval_csv);
        if (*cmd_synth)
            return run_synth(synth_out, synth_classes, synth_per_class, synth_test_per_class,
                             synth_seed, synth_side);
        if (*cmd_sweep)
            return run_sweep(sweep_cfg, sweep_train, sweep_test, sweep_csv, sweep_banks,
                             sweep_angles);
    } catch (const gabrad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::fingerprint_mismatch ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
