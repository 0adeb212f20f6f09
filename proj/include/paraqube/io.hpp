#pragma once

// Plain-text file formats: QUBO instance files, sample sets, and observable
// series. Floating-point values are written in the shortest form that parses
// back to the identical double, so deterministic runs are byte-identical.

#include <charconv>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paraqube/observables.hpp"
#include "paraqube/solvers.hpp"

namespace paraqube {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    detail::require(res.ec == std::errc(), "format_double: conversion failed");
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what = "parse_double") {
    double v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": malformed number '" +
                                    std::string(s) + "'");
    return v;
}

inline std::uint64_t parse_uint(std::string_view s, const char* what = "parse_uint") {
    std::uint64_t v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": malformed integer '" +
                                    std::string(s) + "'");
    return v;
}

inline std::int64_t parse_int(std::string_view s, const char* what = "parse_int") {
    std::int64_t v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(what) + ": malformed integer '" +
                                    std::string(s) + "'");
    return v;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Line reader that strips carriage returns and skips blanks and comments.
struct LineReader {
    std::istream& is;
    std::string line{};

    bool next(bool skip_comments = true) {
        while (std::getline(is, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (skip_comments && line[0] == '#') continue;
            return true;
        }
        return false;
    }

    void expect(const char* what) {
        if (!next()) throw std::invalid_argument(std::string(what) + ": unexpected end of input");
    }
};

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string bits_to_string(const Bits& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t b = 0; b < bits.size(); ++b)
        if (bits[b]) s[b] = '1';
    return s;
}

inline Bits string_to_bits(const std::string& s, const char* what) {
    Bits bits(s.size());
    for (std::size_t b = 0; b < s.size(); ++b) {
        if (s[b] == '0')
            bits[b] = 0;
        else if (s[b] == '1')
            bits[b] = 1;
        else
            throw std::invalid_argument(std::string(what) + ": bit string '" + s +
                                        "' contains a character other than 0/1");
    }
    return bits;
}

}  // namespace detail

inline constexpr const char* kInstanceHeader = "paraqube-qubo v1";
inline constexpr const char* kSamplesHeader = "# paraqube-samples v1";
inline constexpr const char* kObservablesHeader = "# paraqube-observables v1";

inline void write_instance(const QuboInstance& inst, std::ostream& os) {
    detail::require(!inst.system.empty() &&
                        inst.system.find_first_of(" \t") == std::string::npos,
                    "write_instance: system label must be non-empty without spaces");
    detail::require(inst.linear.size() == inst.n_bits, "write_instance: malformed instance");
    os << kInstanceHeader << "\n";
    os << "system " << inst.system << "\n";
    os << "L " << inst.L << "\n";
    os << "N " << inst.N << "\n";
    os << "R " << inst.code.R << "\n";
    os << "D " << inst.code.D << "\n";
    os << "layout part-major\n";
    os << "nbits " << inst.n_bits << "\n";
    os << "offset " << format_double(inst.offset) << "\n";
    for (std::size_t b = 0; b < inst.n_bits; ++b)
        if (inst.linear[b] != 0.0) os << "lin " << b << " " << format_double(inst.linear[b]) << "\n";
    for (const auto& t : inst.quadratic) {
        detail::require(t.i < t.j && t.j < inst.n_bits, "write_instance: malformed coupling");
        os << "quad " << t.i << " " << t.j << " " << format_double(t.value) << "\n";
    }
}

inline QuboInstance read_instance(std::istream& is) {
    detail::LineReader reader{is};
    reader.expect("read_instance");
    if (reader.line != kInstanceHeader)
        throw std::invalid_argument("read_instance: unrecognized header '" + reader.line + "'");

    auto expect_value = [&](const char* key) -> std::string {
        reader.expect("read_instance");
        const std::string prefix = std::string(key) + " ";
        if (reader.line.rfind(prefix, 0) != 0)
            throw std::invalid_argument("read_instance: expected '" + std::string(key) +
                                        " ...', got '" + reader.line + "'");
        return reader.line.substr(prefix.size());
    };

    QuboInstance inst;
    inst.system = expect_value("system");
    inst.L = parse_uint(expect_value("L"), "read_instance: L");
    inst.N = parse_uint(expect_value("N"), "read_instance: N");
    inst.code.R = parse_uint(expect_value("R"), "read_instance: R");
    inst.code.D = static_cast<int>(parse_int(expect_value("D"), "read_instance: D"));
    const std::string layout = expect_value("layout");
    if (layout != "part-major")
        throw std::invalid_argument("read_instance: unsupported layout '" + layout +
                                    "', this reader understands 'part-major'");
    inst.n_bits = parse_uint(expect_value("nbits"), "read_instance: nbits");
    inst.offset = parse_double(expect_value("offset"), "read_instance: offset");
    detail::require(inst.code.R >= 1, "read_instance: R must be positive");
    if (inst.L > 0 && inst.N > 0)
        detail::require(inst.n_bits == 2 * inst.L * inst.N * inst.code.R,
                        "read_instance: nbits does not match 2*L*N*R");
    else
        detail::require(inst.n_bits % inst.code.R == 0,
                        "read_instance: nbits is not a multiple of R");

    inst.linear.assign(inst.n_bits, 0.0);
    std::vector<bool> seen_lin(inst.n_bits, false);
    while (reader.next()) {
        std::istringstream row(reader.line);
        std::string tag;
        row >> tag;
        if (tag == "lin") {
            std::string sb, sv, extra;
            row >> sb >> sv;
            if (!row || (row >> extra))
                throw std::invalid_argument("read_instance: malformed line '" + reader.line + "'");
            const std::uint64_t b = parse_uint(sb, "read_instance: lin index");
            detail::require(b < inst.n_bits, "read_instance: lin index out of range");
            if (seen_lin[b])
                throw std::invalid_argument("read_instance: duplicate lin entry for bit " + sb);
            seen_lin[b] = true;
            inst.linear[b] = parse_double(sv, "read_instance: lin value");
        } else if (tag == "quad") {
            std::string si, sj, sv, extra;
            row >> si >> sj >> sv;
            if (!row || (row >> extra))
                throw std::invalid_argument("read_instance: malformed line '" + reader.line + "'");
            const std::uint64_t i = parse_uint(si, "read_instance: quad index");
            const std::uint64_t j = parse_uint(sj, "read_instance: quad index");
            detail::require(i < j && j < inst.n_bits,
                            "read_instance: quad indices must satisfy i < j < nbits");
            inst.quadratic.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                      parse_double(sv, "read_instance: quad value")});
        } else {
            throw std::invalid_argument("read_instance: unknown line '" + reader.line + "'");
        }
    }
    std::sort(inst.quadratic.begin(), inst.quadratic.end(),
              [](const QuadTerm& a, const QuadTerm& b) {
                  return a.i != b.i ? a.i < b.i : a.j < b.j;
              });
    for (std::size_t k = 1; k < inst.quadratic.size(); ++k)
        if (inst.quadratic[k].i == inst.quadratic[k - 1].i &&
            inst.quadratic[k].j == inst.quadratic[k - 1].j)
            throw std::invalid_argument("read_instance: duplicate coupling (" +
                                        std::to_string(inst.quadratic[k].i) + "," +
                                        std::to_string(inst.quadratic[k].j) + ")");
    require_finite(inst.linear, "read_instance");
    return inst;
}

// Samples: '#'-prefixed metadata, a column header, then one row per distinct
// bit pattern. Deterministic outputs carry no timestamp so identical runs
// produce identical bytes; wall time never enters the file.
inline void write_samples(const SampleSet& set, std::ostream& os, bool deterministic = true) {
    os << kSamplesHeader << "\n";
    if (!set.solver.empty()) os << "# solver " << set.solver << "\n";
    os << "# seed " << set.seed << "\n";
    if (!set.config.empty()) os << "# config " << set.config << "\n";
    os << "# total " << set.total_count << "\n";
    if (!deterministic) os << "# generated " << detail::utc_timestamp() << "\n";
    os << "bits,energy,count\n";
    for (const auto& rec : set.records)
        os << detail::bits_to_string(rec.bits) << "," << format_double(rec.energy) << ","
           << rec.count << "\n";
}

inline SampleSet read_samples(std::istream& is) {
    detail::LineReader reader{is};
    if (!reader.next(false) || reader.line != kSamplesHeader)
        throw std::invalid_argument("read_samples: missing header line");

    SampleSet set;
    bool have_total = false;
    std::uint64_t declared_total = 0;
    while (reader.next(false)) {
        if (reader.line[0] == '#') {
            std::istringstream meta(reader.line.substr(1));
            std::string key;
            meta >> key;
            std::string value;
            std::getline(meta, value);
            if (!value.empty() && value[0] == ' ') value.erase(0, 1);
            if (key == "solver")
                set.solver = value;
            else if (key == "seed")
                set.seed = parse_uint(value, "read_samples: seed");
            else if (key == "config")
                set.config = value;
            else if (key == "total") {
                declared_total = parse_uint(value, "read_samples: total");
                have_total = true;
            }
            continue;
        }
        break;
    }
    if (reader.line != "bits,energy,count")
        throw std::invalid_argument("read_samples: expected column header, got '" + reader.line +
                                    "'");

    std::vector<SampleRecord> records;
    while (reader.next(false)) {
        const auto fields = detail::split(reader.line, ',');
        if (fields.size() != 3)
            throw std::invalid_argument("read_samples: malformed row '" + reader.line + "'");
        records.push_back({detail::string_to_bits(fields[0], "read_samples"),
                           parse_double(fields[1], "read_samples: energy"),
                           parse_uint(fields[2], "read_samples: count")});
        if (!records.empty() && records.back().bits.size() != records.front().bits.size())
            throw std::invalid_argument("read_samples: inconsistent bit-string lengths");
    }
    set.records = merge_sample_records(std::move(records));
    set.total_count = 0;
    for (const auto& rec : set.records) set.total_count += rec.count;
    if (have_total && declared_total != set.total_count)
        throw std::invalid_argument("read_samples: declared total " +
                                    std::to_string(declared_total) + " does not match row sum " +
                                    std::to_string(set.total_count));
    return set;
}

struct ObservableFile {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<ObservableRow> rows;
};

inline void write_observables(const std::vector<ObservableRow>& rows,
                              const std::vector<std::pair<std::string, std::string>>& metadata,
                              std::ostream& os, bool deterministic = true) {
    os << kObservablesHeader << "\n";
    for (const auto& [key, value] : metadata) {
        detail::require(!key.empty() && key.find_first_of(" \t") == std::string::npos,
                        "write_observables: metadata keys must be single words");
        os << "# " << key << " " << value << "\n";
    }
    if (!deterministic) os << "# generated " << detail::utc_timestamp() << "\n";
    os << "t,qubit,sigma_z,fidelity\n";
    for (const auto& row : rows)
        os << format_double(row.t) << "," << row.qubit << "," << format_double(row.sigma_z) << ","
           << format_double(row.fidelity) << "\n";
}

inline ObservableFile read_observables(std::istream& is) {
    detail::LineReader reader{is};
    if (!reader.next(false) || reader.line != kObservablesHeader)
        throw std::invalid_argument("read_observables: missing header line");

    ObservableFile file;
    while (reader.next(false)) {
        if (reader.line[0] == '#') {
            std::istringstream meta(reader.line.substr(1));
            std::string key;
            meta >> key;
            std::string value;
            std::getline(meta, value);
            if (!value.empty() && value[0] == ' ') value.erase(0, 1);
            file.metadata.push_back({key, value});
            continue;
        }
        break;
    }
    if (reader.line != "t,qubit,sigma_z,fidelity")
        throw std::invalid_argument("read_observables: expected column header, got '" +
                                    reader.line + "'");
    while (reader.next(false)) {
        const auto fields = detail::split(reader.line, ',');
        if (fields.size() != 4)
            throw std::invalid_argument("read_observables: malformed row '" + reader.line + "'");
        file.rows.push_back({parse_double(fields[0], "read_observables: t"),
                             static_cast<std::size_t>(parse_uint(fields[1], "read_observables: qubit")),
                             parse_double(fields[2], "read_observables: sigma_z"),
                             parse_double(fields[3], "read_observables: fidelity")});
    }
    return file;
}

namespace detail {

inline std::ofstream open_output(const std::string& path, const char* what) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(std::string(what) + ": cannot open '" + path + "'");
    return os;
}

inline std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error(std::string(what) + ": cannot open '" + path + "'");
    return is;
}

}  // namespace detail

inline void write_instance_file(const QuboInstance& inst, const std::string& path) {
    auto os = detail::open_output(path, "write_instance_file");
    write_instance(inst, os);
}

inline QuboInstance read_instance_file(const std::string& path) {
    auto is = detail::open_input(path, "read_instance_file");
    return read_instance(is);
}

inline void write_samples_file(const SampleSet& set, const std::string& path,
                               bool deterministic = true) {
    auto os = detail::open_output(path, "write_samples_file");
    write_samples(set, os, deterministic);
}

inline SampleSet read_samples_file(const std::string& path) {
    auto is = detail::open_input(path, "read_samples_file");
    return read_samples(is);
}

inline void write_observables_file(const std::vector<ObservableRow>& rows,
                                   const std::vector<std::pair<std::string, std::string>>& metadata,
                                   const std::string& path, bool deterministic = true) {
    auto os = detail::open_output(path, "write_observables_file");
    write_observables(rows, metadata, os, deterministic);
}

inline ObservableFile read_observables_file(const std::string& path) {
    auto is = detail::open_input(path, "read_observables_file");
    return read_observables(is);
}

}  // namespace paraqube
