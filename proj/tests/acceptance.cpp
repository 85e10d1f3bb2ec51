// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria 7 and 8 drive the actual CLI binary end to end
// (pass its path with --cli); criterion 9 needs a user-supplied IRMA corpus
// and is skipped unless GABRAD_IRMA_TRAIN / GABRAD_IRMA_TEST are set.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gabrad/gabrad.hpp"

namespace fs = std::filesystem;
using namespace gabrad;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void report_skip(int criterion, const std::string& name, const std::string& why) {
    std::printf("[SKIP] criterion %d: %s -- %s\n", criterion, name.c_str(), why.c_str());
    std::fflush(stdout);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// ---------- criterion 1: structural law ----------

void criterion_structural() {
    bool ok = vector_dimension(32, 32, 12, 4, 4) == 768;

    PipelineConfig cfg; // defaults: GBF(4,5,23,23), d1=d2=4
    ok = ok && cfg.vector_dim() == 1280;

    Image img(128, 128, 0.0);
    std::mt19937_64 rng(1);
    for (auto& p : img.pixels) p = uniform01(rng);
    GaborBank bank = build_bank(cfg.gabor);
    GaborRadonFeatures f = extract_gabor_radon(img, bank, cfg.extract_options());
    ok = ok && f.grf.size() == 1280 && f.grbf.size() == 1280;

    report(1, "structural law: VD(32,32,12,4,4)=768 and GBF(4,5) length 1280", ok);
}

// ---------- criterion 2: radon oracle + mass conservation ----------

double oracle_line_sum(const Image& img, double rho, double theta) {
    double c = (img.width - 1) / 2.0;
    double ct = std::cos(theta), st = std::sin(theta);
    double acc = 0.0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double coverage = 0.0;
            for (double dx : {-0.25, 0.25})
                for (double dy : {-0.25, 0.25}) {
                    double dist = (x + dx - c) * ct + (y + dy - c) * st - rho;
                    coverage += std::max(0.0, 1.0 - std::abs(dist));
                }
            acc += 0.25 * coverage * img.at(x, y);
        }
    return acc;
}

void criterion_radon() {
    bool oracle_ok = true;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 25 && oracle_ok; ++seed) {
        std::mt19937_64 rng(4000 + seed);
        Image img(8, 8);
        for (auto& p : img.pixels) p = uniform01(rng);
        for (int n_angles : {4, 8}) {
            Sinogram sino = radon_transform(img, n_angles);
            double bc = (sino.n_bins - 1) / 2.0;
            for (int k = 0; k < n_angles; ++k) {
                double theta = sino.angles_deg[static_cast<std::size_t>(k)]
                             * std::numbers::pi / 180.0;
                double half = img.width / 2.0
                            * (std::abs(std::cos(theta)) + std::abs(std::sin(theta)));
                for (int r = 0; r < sino.n_bins; ++r) {
                    double rho = r - bc;
                    if (std::abs(rho) > half - 2.0) continue; // interior bins
                    double want = oracle_line_sum(img, rho, theta);
                    double rel = std::abs(sino.at(r, k) - want) / std::max(std::abs(want), 1e-300);
                    worst = std::max(worst, rel);
                    if (rel > 2e-2) oracle_ok = false;
                }
            }
        }
    }

    bool mass_ok = true;
    double worst_mass = 0.0;
    int side = 32;
    int margin = static_cast<int>(std::ceil(side * (std::numbers::sqrt2 - 1) / 2));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(7000 + seed);
        Image img(side, side, 0.0);
        double total = 0.0;
        for (int y = margin; y < side - margin; ++y)
            for (int x = margin; x < side - margin; ++x) {
                img.at(x, y) = uniform01(rng);
                total += img.at(x, y);
            }
        Sinogram sino = radon_transform(img, 16);
        for (int k = 0; k < sino.n_angles; ++k) {
            double col = 0.0;
            for (int r = 0; r < sino.n_bins; ++r) col += sino.at(r, k);
            double rel = std::abs(col - total) / total;
            worst_mass = std::max(worst_mass, rel);
            if (rel > 1e-6) mass_ok = false;
        }
    }

    char detail[128];
    std::snprintf(detail, sizeof(detail), "worst oracle rel %.3e (<=2e-2), worst mass rel %.3e (<=1e-6)",
                  worst, worst_mass);
    report(2, "radon oracle equivalence and per-angle mass conservation", oracle_ok && mass_ok,
           detail);
}

// ---------- criterion 3: convolution oracle ----------

void criterion_convolution() {
    bool ok = true;
    double worst = 0.0;
    std::mt19937_64 rng(31337);
    auto u = [&] { return uniform01(rng) * 2.0 - 1.0; };
    for (int trial = 0; trial < 100 && ok; ++trial) {
        int ks = 1 + 2 * static_cast<int>(rng() % 4);
        Image img(16, 16);
        for (auto& p : img.pixels) p = u();
        GaborKernel k;
        k.width = k.height = ks;
        k.taps.resize(static_cast<std::size_t>(ks) * ks);
        for (auto& t : k.taps) t = {u(), u()};

        ComplexImage got = convolve(img, k);
        int cw = ks / 2, ch = ks / 2;
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) {
                std::complex<double> acc{0, 0};
                for (int t = -ch; t <= ch; ++t)
                    for (int s = -cw; s <= cw; ++s) {
                        int sx = x - s, sy = y - t;
                        if (sx < 0 || sx >= 16 || sy < 0 || sy >= 16) continue;
                        acc += img.at(sx, sy) * k.at(s + cw, t + ch);
                    }
                double diff = std::abs(got.at(x, y) - acc);
                worst = std::max(worst, diff);
                if (diff > 1e-10) ok = false;
            }
    }
    char detail[64];
    std::snprintf(detail, sizeof(detail), "worst abs diff %.3e (<=1e-10)", worst);
    report(3, "convolution matches the quadruple-loop oracle", ok, detail);
}

// ---------- criterion 4: svm correctness ----------

double kkt_residual(double signed_alpha, int label, double decision, double c) {
    double alpha = signed_alpha * label;
    double margin = label * decision;
    if (alpha <= 1e-9 * c) return std::max(0.0, 1.0 - margin);
    if (alpha >= c * (1.0 - 1e-9)) return std::max(0.0, margin - 1.0);
    return std::abs(margin - 1.0);
}

void criterion_svm() {
    const double tol = 1e-3;
    double worst_kkt = 0.0;
    auto track_kkt = [&](const FeatureMatrix& x, const std::vector<int>& y,
                         const BinaryModel& m, const KernelSpec& spec, const SmoStats& st,
                         double c) {
        for (std::size_t i = 0; i < x.rows; ++i) {
            double d = decision_value(m, spec, x.row(i));
            worst_kkt = std::max(worst_kkt, kkt_residual(st.alphas[i], y[i], d, c));
        }
    };

    // (a) xor
    FeatureMatrix xor_x;
    xor_x.dim = 2;
    for (auto& row : {std::vector<double>{0, 0}, {1, 1}, {1, 0}, {0, 1}}) xor_x.push_row(row);
    std::vector<int> xor_y{-1, -1, +1, +1};
    KernelSpec rbf{KernelKind::rbf, 1.0, 3, 1.0};
    SmoStats xor_stats;
    BinaryModel xor_model = train_binary(xor_x, xor_y, rbf, 10.0, tol, 100, &xor_stats);
    bool xor_ok = true;
    for (std::size_t i = 0; i < 4; ++i) {
        double d = decision_value(xor_model, rbf, xor_x.row(i));
        if ((d >= 0 ? +1 : -1) != xor_y[i]) xor_ok = false;
    }
    track_kkt(xor_x, xor_y, xor_model, rbf, xor_stats, 10.0);

    // (c) 20 random linearly separable 8-point sets, zero training errors
    bool separable_ok = true;
    std::mt19937_64 rng(616);
    auto u = [&] { return uniform01(rng) * 2.0 - 1.0; };
    KernelSpec lin{KernelKind::linear, 1.0, 3, 1.0};
    for (int set = 0; set < 20; ++set) {
        double angle = u() * std::numbers::pi;
        double nx = std::cos(angle), ny = std::sin(angle);
        FeatureMatrix x;
        x.dim = 2;
        std::vector<int> y;
        for (int i = 0; i < 8; ++i) {
            int label = i % 2 == 0 ? +1 : -1;
            double along = (0.25 + 0.75 * std::abs(u())) * label;
            double across = u() * 2.0;
            x.push_row(std::vector<double>{along * nx - across * ny, along * ny + across * nx});
            y.push_back(label);
        }
        SmoStats stats;
        BinaryModel m = train_binary(x, y, lin, 1e6, tol, 200, &stats);
        for (std::size_t i = 0; i < x.rows; ++i) {
            double d = decision_value(m, lin, x.row(i));
            if ((d >= 0 ? +1 : -1) != y[i]) separable_ok = false;
        }
        track_kkt(x, y, m, lin, stats, 1e6);
    }

    // (d) one-against-one counts
    bool count_ok = true;
    for (int k : {2, 3, 5, 10}) {
        std::vector<LabeledSample> data;
        for (int cls = 0; cls < k; ++cls)
            for (int i = 0; i < 3; ++i)
                data.push_back({"c" + std::to_string(cls),
                                {cls + 0.05 * uniform01(rng), cls - 0.05 * uniform01(rng)}});
        MulticlassModel m = train_multiclass(data, rbf, 10.0, tol);
        if (m.binaries.size() != static_cast<std::size_t>(k * (k - 1) / 2)) count_ok = false;
    }

    bool kkt_ok = worst_kkt <= 2 * tol;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "xor %s, separable %s, counts %s, worst KKT residual %.3e (<=%.0e)",
                  xor_ok ? "ok" : "FAIL", separable_ok ? "ok" : "FAIL",
                  count_ok ? "ok" : "FAIL", worst_kkt, 2 * tol);
    report(4, "svm correctness suite", xor_ok && separable_ok && count_ok && kkt_ok, detail);
}

// ---------- criterion 5: metric axioms ----------

void criterion_metric() {
    std::mt19937_64 rng(55);
    auto random_code = [&](std::size_t bits) {
        BitVec v(bits);
        for (std::size_t i = 0; i < bits; ++i) v.set(i, rng() & 1);
        return v;
    };

    bool axioms_ok = true;
    for (int t = 0; t < 10000 && axioms_ok; ++t) {
        std::size_t bits = 1 + rng() % 96;
        BitVec a = random_code(bits), b = random_code(bits), c = random_code(bits);
        std::size_t ab = hamming(a, b);
        if (ab != hamming(b, a)) axioms_ok = false;
        if ((ab == 0) != (a == b)) axioms_ok = false;
        if (hamming(a, c) > ab + hamming(b, c)) axioms_ok = false;
    }

    bool popcount_ok = true;
    for (int t = 0; t < 1000 && popcount_ok; ++t) {
        std::size_t bits = 1 + rng() % 300;
        BitVec a = random_code(bits), b = random_code(bits);
        std::size_t naive = 0;
        for (std::size_t i = 0; i < bits; ++i)
            if (a.get(i) != b.get(i)) ++naive;
        if (hamming(a, b) != naive) popcount_ok = false;
    }

    report(5, "hamming metric axioms and packed popcount equivalence",
           axioms_ok && popcount_ok);
}

// ---------- criterion 6: irma error unit truths ----------

void criterion_irma() {
    std::array<std::uint32_t, 13> uniform;
    uniform.fill(4);
    AlphabetTable table = AlphabetTable::from_sizes(uniform);

    IrmaCode a = parse_irma("1121120200700");
    bool zero_ok = irma_error(a, a, table) == 0.0;

    IrmaCode all_wrong = parse_irma("2232231311811");
    bool one_ok = irma_error(a, all_wrong, table) == 1.0;

    std::array<std::uint32_t, 13> sizes{1, 1, 1, 1, 2, 4, 10, 1, 1, 1, 1, 1, 1};
    AlphabetTable axis_table = AlphabetTable::from_sizes(sizes);
    ErrorOptions raw;
    raw.normalize = false;
    double got = irma_error(parse_irma("1111123111111"), parse_irma("1111923111111"),
                            axis_table, raw);
    double want = 0.5 + 0.125 + 1.0 / 30.0; // (1/2)(1/1)+(1/4)(1/2)+(1/10)(1/3)
    bool axis_ok = std::abs(got - want) <= 1e-9;

    char detail[96];
    std::snprintf(detail, sizeof(detail), "axis example %.12f vs %.12f", got, want);
    report(6, "irma error unit truths", zero_ok && one_ok && axis_ok, detail);
}

// ---------- criteria 7/8: end-to-end via the CLI ----------

struct CliRunner {
    std::string cli;
    fs::path workdir;
    int runs = 0;

    int run(const std::string& args, const fs::path& log) const {
        std::string cmd = "\"" + cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
        int status = std::system(cmd.c_str());
        if (status == -1) return -1;
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
};

std::string grep_value(const fs::path& file, const std::string& key) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key, 0) == 0) return line.substr(key.size());
    return "";
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::istreambuf_iterator<char> ia(fa), ib(fb), end;
    while (ia != end && ib != end)
        if (*ia++ != *ib++) return false;
    return ia == end && ib == end;
}

struct PipelineArtifacts {
    fs::path features, barcodes, model, index, eval_log, eval_csv;
    bool ok = false;
};

PipelineArtifacts run_pipeline(const CliRunner& cli, const fs::path& dir, int workers,
                               bool with_eval) {
    PipelineArtifacts art;
    fs::create_directories(dir);
    fs::path data = dir / "data";
    std::string w = " --workers " + std::to_string(workers);

    if (cli.run("synth --out \"" + data.string() + "\" --classes 4 --per-class 50"
                " --test-per-class 20 --seed 7",
                dir / "synth.log") != 0)
        return art;

    art.features = dir / "train.grf";
    art.barcodes = dir / "train.grb";
    if (cli.run("extract --manifest \"" + (data / "train.tsv").string() + "\" --out-features \""
                + art.features.string() + "\" --out-barcodes \"" + art.barcodes.string() + "\"" + w,
                dir / "extract.log") != 0)
        return art;

    art.model = dir / "model.svm";
    if (cli.run("train --features \"" + art.features.string() + "\" --manifest \""
                + (data / "train.tsv").string() + "\" --out-model \"" + art.model.string() + "\"" + w,
                dir / "train.log") != 0)
        return art;

    art.index = dir / "index.idx";
    if (cli.run("build-index --barcodes \"" + art.barcodes.string() + "\" --manifest \""
                + (data / "train.tsv").string() + "\" --out-index \"" + art.index.string() + "\"" + w,
                dir / "index.log") != 0)
        return art;

    if (with_eval) {
        art.eval_log = dir / "eval.log";
        art.eval_csv = dir / "eval.csv";
        if (cli.run("evaluate --manifest \"" + (data / "test.tsv").string() + "\" --model \""
                    + art.model.string() + "\" --index \"" + art.index.string() + "\" --csv \""
                    + art.eval_csv.string() + "\"" + w,
                    art.eval_log) != 0)
            return art;
    }
    art.ok = true;
    return art;
}

void criteria_end_to_end(const CliRunner& cli) {
    // ---- criterion 7: desk-scale synthetic run, single worker ----
    fs::path run1 = cli.workdir / "run1";
    PipelineArtifacts a1 = run_pipeline(cli, run1, 1, true);
    if (!a1.ok) {
        report(7, "desk-scale synthetic end-to-end", false, "pipeline run failed; see " + run1.string());
        report(8, "determinism", false, "skipped: baseline run failed");
        return;
    }

    double accuracy = std::atof(grep_value(a1.eval_log, "accuracy=").c_str());
    bool acc_ok = accuracy >= 0.90;

    // rank-1 class consistency among correctly classified queries
    std::size_t correct = 0, consistent = 0;
    {
        std::ifstream csv(a1.eval_csv);
        std::string line;
        std::getline(csv, line); // header
        while (std::getline(csv, line)) {
            std::stringstream ss(line);
            std::string id, truth, predicted, rid, rcode, err;
            std::getline(ss, id, ',');
            std::getline(ss, truth, ',');
            std::getline(ss, predicted, ',');
            std::getline(ss, rid, ',');
            std::getline(ss, rcode, ',');
            std::getline(ss, err, ',');
            if (predicted == truth) {
                ++correct;
                if (rcode == truth) ++consistent;
            }
        }
    }
    bool consistency_ok = correct > 0
                       && static_cast<double>(consistent) / static_cast<double>(correct) >= 0.90;

    // every indexed image self-retrieves at distance 0
    bool self_ok = true;
    {
        BarcodeFile codes = read_barcode_file(a1.barcodes.string());
        ClassIndex index = read_index_file(a1.index.string());
        std::map<std::string, std::string> label_of;
        for (const auto& [label, bucket] : index.buckets())
            for (const auto& rec : bucket) label_of[rec.id] = label;
        for (const auto& rec : codes.records) {
            auto hits = index.query(label_of.at(rec.id), rec.code, 1);
            if (hits.empty() || hits[0].id != rec.id || hits[0].distance != 0) self_ok = false;
        }
    }

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "accuracy %.4f (>=0.90), rank-1 class consistency %zu/%zu (>=0.90), self-retrieval %s",
                  accuracy, consistent, correct, self_ok ? "ok" : "FAIL");
    report(7, "desk-scale synthetic end-to-end", acc_ok && consistency_ok && self_ok, detail);

    // ---- criterion 8: determinism ----
    fs::path run2 = cli.workdir / "run2";
    PipelineArtifacts a2 = run_pipeline(cli, run2, 1, false);
    bool bytes_ok = a2.ok && same_bytes(a1.features, a2.features)
                 && same_bytes(a1.barcodes, a2.barcodes) && same_bytes(a1.model, a2.model)
                 && same_bytes(a1.index, a2.index);

    // 8-worker extraction and training must give byte-identical artifacts
    fs::path par_features = cli.workdir / "par.grf";
    fs::path par_barcodes = cli.workdir / "par.grb";
    bool par_extract_ok =
        cli.run("extract --manifest \"" + (run1 / "data" / "train.tsv").string()
                    + "\" --out-features \"" + par_features.string() + "\" --out-barcodes \""
                    + par_barcodes.string() + "\" --workers 8",
                cli.workdir / "par_extract.log") == 0
        && same_bytes(a1.features, par_features) && same_bytes(a1.barcodes, par_barcodes);

    fs::path par_model = cli.workdir / "par.svm";
    bool par_train_ok =
        cli.run("train --features \"" + a1.features.string() + "\" --manifest \""
                    + (run1 / "data" / "train.tsv").string() + "\" --out-model \""
                    + par_model.string() + "\" --workers 8",
                cli.workdir / "par_train.log") == 0
        && same_bytes(a1.model, par_model);
    par_extract_ok = par_extract_ok && par_train_ok;

    // 8-worker evaluation must report identical numbers
    fs::path par_eval = cli.workdir / "par_eval.log";
    bool par_eval_ok = cli.run("evaluate --manifest \""
                                   + (run1 / "data" / "test.tsv").string() + "\" --model \""
                                   + a1.model.string() + "\" --index \"" + a1.index.string()
                                   + "\" --workers 8",
                               par_eval) == 0
                    && grep_value(par_eval, "accuracy=") == grep_value(a1.eval_log, "accuracy=")
                    && grep_value(par_eval, "e_total=") == grep_value(a1.eval_log, "e_total=");

    std::snprintf(detail, sizeof(detail),
                  "artifact bytes %s, 8-worker extract+train %s, 8-worker eval %s",
                  bytes_ok ? "identical" : "DIFFER", par_extract_ok ? "identical" : "DIFFER",
                  par_eval_ok ? "identical" : "DIFFER");
    report(8, "determinism across runs and worker counts", bytes_ok && par_extract_ok && par_eval_ok,
           detail);
}

// ---------- criterion 9: IRMA trends (dataset-dependent) ----------

void criterion_irma_sweep(const CliRunner& cli) {
    const char* train_env = std::getenv("GABRAD_IRMA_TRAIN");
    const char* test_env = std::getenv("GABRAD_IRMA_TEST");
    if (!train_env || !test_env) {
        report_skip(9, "IRMA sweep trends",
                    "requires the user-supplied IRMA dataset; set GABRAD_IRMA_TRAIN and "
                    "GABRAD_IRMA_TEST to its manifests");
        return;
    }

    fs::path csv_path = cli.workdir / "sweep.csv";
    int code = cli.run("sweep --train-manifest \"" + std::string(train_env)
                           + "\" --test-manifest \"" + std::string(test_env) + "\" --out-csv \""
                           + csv_path.string() + "\" --banks 3x4,4x3,4x5,5x4,4x6,6x4,6x8,8x6"
                           + " --angles 8 16 32",
                       cli.workdir / "sweep.log");
    if (code != 0) {
        report(9, "IRMA sweep trends", false, "sweep command failed");
        return;
    }

    struct Row {
        int scales, orients, n_p;
        double accuracy, e_total;
    };
    std::vector<Row> rows;
    std::ifstream csv(csv_path);
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        Row r{};
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ','); // bank name
        std::getline(ss, field, ',');
        r.scales = std::stoi(field);
        std::getline(ss, field, ',');
        r.orients = std::stoi(field);
        std::getline(ss, field, ',');
        r.n_p = std::stoi(field);
        std::getline(ss, field, ','); // vd
        std::getline(ss, field, ',');
        r.accuracy = std::stod(field);
        std::getline(ss, field, ',');
        r.e_total = std::stod(field);
        rows.push_back(r);
    }

    auto find_row = [&](int s, int o, int np) -> const Row* {
        for (const Row& r : rows)
            if (r.scales == s && r.orients == o && r.n_p == np) return &r;
        return nullptr;
    };

    // trend 1: n_p=32 at least as accurate as n_p=8 for the GBF(4,.) rows
    bool trend_angles = true;
    for (int orients : {3, 5, 6}) {
        const Row* lo = find_row(4, orients, 8);
        const Row* hi = find_row(4, orients, 32);
        if (!lo || !hi || hi->accuracy < lo->accuracy) trend_angles = false;
    }

    // trend 2: GBF(4,5) among the top 2 banks at n_p=32
    std::vector<std::pair<double, std::pair<int, int>>> at32;
    for (const Row& r : rows)
        if (r.n_p == 32) at32.push_back({r.accuracy, {r.scales, r.orients}});
    std::sort(at32.rbegin(), at32.rend());
    bool trend_rank = at32.size() >= 2
                   && (at32[0].second == std::make_pair(4, 5) || at32[1].second == std::make_pair(4, 5));

    const Row* best = find_row(4, 5, 32);
    bool range_ok = best && best->e_total >= 200.0 && best->e_total <= 330.0;

    char detail[160];
    std::snprintf(detail, sizeof(detail), "angles trend %s, GBF(4,5) top-2 %s, E_total %s [200,330]",
                  trend_angles ? "ok" : "FAIL", trend_rank ? "ok" : "FAIL",
                  range_ok ? "in" : "OUT of");
    report(9, "IRMA sweep trends", trend_angles && trend_rank && range_ok, detail);
}

} // namespace

int main(int argc, char** argv) {
    std::string cli_path;
    std::string workdir;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli_path = argv[++i];
        else if (arg == "--workdir" && i + 1 < argc) workdir = argv[++i];
    }

    criterion_structural();
    criterion_radon();
    criterion_convolution();
    criterion_svm();
    criterion_metric();
    criterion_irma();

    if (cli_path.empty()) {
        report(7, "desk-scale synthetic end-to-end", false, "--cli <gabrad binary> not given");
        report(8, "determinism", false, "--cli <gabrad binary> not given");
    } else {
        CliRunner cli;
        cli.cli = cli_path;
        cli.workdir = workdir.empty()
                          ? fs::temp_directory_path()
                                / ("gabrad_acceptance_" + std::to_string(::getpid()))
                          : fs::path(workdir);
        fs::create_directories(cli.workdir);
        criteria_end_to_end(cli);
        criterion_irma_sweep(cli);
        if (g_failures == 0 && workdir.empty()) {
            std::error_code ec;
            fs::remove_all(cli.workdir, ec);
        } else {
            std::printf("work directory kept at %s\n", cli.workdir.string().c_str());
        }
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
