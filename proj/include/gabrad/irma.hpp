#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "gabrad/errors.hpp"

namespace gabrad {

/// 13-character hierarchical label in four axes: technical (4), directional
/// (3), anatomical (3), biological (3). Characters are 0-9a-z.
struct IrmaCode {
    std::string raw; // 13 chars, no hyphens

    static constexpr std::array<int, 4> axis_lengths{4, 3, 3, 3};

    std::string axis(int a) const {
        int off = 0;
        for (int i = 0; i < a; ++i) off += axis_lengths[static_cast<std::size_t>(i)];
        return raw.substr(static_cast<std::size_t>(off),
                          static_cast<std::size_t>(axis_lengths[static_cast<std::size_t>(a)]));
    }

    /// Canonical hyphenated form TTTT-DDD-AAA-BBB.
    std::string hyphenated() const {
        return raw.substr(0, 4) + "-" + raw.substr(4, 3) + "-" + raw.substr(7, 3) + "-"
             + raw.substr(10, 3);
    }

    bool operator==(const IrmaCode&) const = default;
};

/// Accepts the 13-char flat form or the 16-char hyphenated form with
/// hyphens after code positions 4, 7 and 10. A string containing hyphens
/// anywhere else reports MisplacedHyphen; hyphen-free strings of the wrong
/// size report BadLength.
inline IrmaCode parse_irma(const std::string& s) {
    std::string flat;
    if (s.find('-') != std::string::npos) {
        if (s.size() != 16)
            fail(Errc::misplaced_hyphen, "hyphenated form must be TTTT-DDD-AAA-BBB: " + s);
        static constexpr std::array<std::size_t, 3> hyphen_at{4, 8, 12};
        std::size_t h = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (h < hyphen_at.size() && i == hyphen_at[h]) {
                if (s[i] != '-')
                    fail(Errc::misplaced_hyphen, "expected hyphen at offset "
                                                     + std::to_string(i) + ": " + s);
                ++h;
            } else {
                if (s[i] == '-')
                    fail(Errc::misplaced_hyphen, "unexpected hyphen at offset "
                                                     + std::to_string(i) + ": " + s);
                flat.push_back(s[i]);
            }
        }
    } else if (s.size() == 13) {
        flat = s;
    } else {
        fail(Errc::bad_length, "IRMA code must have 13 chars (16 hyphenated), got "
                                   + std::to_string(s.size()) + ": " + s);
    }
    for (char c : flat) {
        bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z');
        if (!ok) fail(Errc::bad_character, std::string("invalid IRMA character '") + c + "' in " + s);
    }
    return IrmaCode{flat};
}

/// Per-position branching factors b_i: how many distinct characters occur
/// at each of the 13 positions across a reference corpus.
struct AlphabetTable {
    std::array<std::uint32_t, 13> sizes{};

    static AlphabetTable from_sizes(const std::array<std::uint32_t, 13>& b) {
        for (std::uint32_t v : b)
            if (v < 1) fail(Errc::position_not_in_table, "branching factor must be >= 1");
        return AlphabetTable{b};
    }
};

inline AlphabetTable build_alphabets(std::span<const IrmaCode> codes) {
    if (codes.empty()) fail(Errc::empty_input, "build_alphabets: no codes supplied");
    std::array<std::set<char>, 13> observed;
    for (const IrmaCode& code : codes)
        for (std::size_t i = 0; i < 13; ++i)
            observed[i].insert(code.raw[i]);
    AlphabetTable table;
    for (std::size_t i = 0; i < 13; ++i)
        table.sizes[i] = static_cast<std::uint32_t>(observed[i].size());
    return table;
}

struct ErrorOptions {
    bool propagate = true;       // a wrong character makes deeper axis positions wrong
    bool normalize = true;       // divide by the error of a fully wrong code
    bool axis_local_positions = true; // 1/i weight restarts at each axis
};

/// Hierarchical retrieval error between a truth code and a retrieved code:
/// sum over positions of (1/b_i)(1/i) * eta, where eta flags a mismatch
/// (with propagation, also every position below a mismatch in its axis).
/// Branching factors are looked up by global position; the 1/i weight uses
/// axis-local numbering unless configured otherwise.
inline double irma_error(const IrmaCode& truth, const IrmaCode& retrieved,
                         const AlphabetTable& table, const ErrorOptions& opt = {}) {
    double err = 0.0, worst = 0.0;
    int global = 0;
    for (int axis = 0; axis < 4; ++axis) {
        bool wrong_above = false;
        for (int i = 1; i <= IrmaCode::axis_lengths[static_cast<std::size_t>(axis)]; ++i, ++global) {
            std::uint32_t b = table.sizes[static_cast<std::size_t>(global)];
            if (b < 1) fail(Errc::position_not_in_table, "alphabet table has an empty position");
            int pos = opt.axis_local_positions ? i : global + 1;
            double w = 1.0 / static_cast<double>(b) / static_cast<double>(pos);
            bool differs = truth.raw[static_cast<std::size_t>(global)]
                        != retrieved.raw[static_cast<std::size_t>(global)];
            bool eta = differs || (opt.propagate && wrong_above);
            if (eta) err += w;
            worst += w;
            wrong_above = wrong_above || differs;
        }
    }
    return opt.normalize ? err / worst : err;
}

inline double total_error(std::span<const std::pair<IrmaCode, IrmaCode>> pairs,
                          const AlphabetTable& table, const ErrorOptions& opt = {}) {
    double sum = 0.0;
    for (const auto& [truth, retrieved] : pairs) sum += irma_error(truth, retrieved, table, opt);
    return sum;
}

struct ManifestRecord {
    std::string id;
    std::string path;
    std::optional<IrmaCode> code; // nullopt: uncategorized ("*")
};

struct Manifest {
    std::vector<ManifestRecord> records;
    std::string split; // "train" | "test"

    std::size_t categorized() const {
        std::size_t n = 0;
        for (const auto& r : records)
            if (r.code) ++n;
        return n;
    }
};

/// Tab-separated manifest: id <TAB> relative-path <TAB> code-or-"*".
/// '#'-prefixed lines and blank lines are skipped. Uncategorized records
/// are kept in the manifest but carry no code; training and evaluation
/// ignore them.
inline Manifest load_manifest(const std::string& path, const std::string& split) {
    std::ifstream in(path);
    if (!in) fail(Errc::missing_file, path);

    Manifest manifest;
    manifest.split = split;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            fail(Errc::malformed_row, path + ":" + std::to_string(line_no)
                                          + ": expected id<TAB>path<TAB>code");
        ManifestRecord rec;
        rec.id = line.substr(0, tab1);
        rec.path = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string code_field = line.substr(tab2 + 1);
        if (rec.id.empty() || rec.path.empty() || code_field.empty())
            fail(Errc::malformed_row, path + ":" + std::to_string(line_no) + ": empty field");
        if (!seen_ids.insert(rec.id).second)
            fail(Errc::duplicate_id, path + ":" + std::to_string(line_no)
                                         + ": duplicate id '" + rec.id + "'");
        if (code_field != "*") {
            try {
                rec.code = parse_irma(code_field);
            } catch (const Error& e) {
                fail(Errc::malformed_row, path + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        manifest.records.push_back(std::move(rec));
    }
    return manifest;
}

} // namespace gabrad
