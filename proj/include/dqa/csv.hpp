#ifndef DQA_CSV_HPP
#define DQA_CSV_HPP

#include "dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dqa {

namespace detail {

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes;
// embedded newlines are not supported.
inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(std::move(field));
    return out;
}

inline std::optional<std::uint8_t> parse_label(std::string_view s) {
    s = trim(s);
    if (s == "1" || s == "true" || s == "TRUE" || s == "True" || s == "1.0") {
        return 1;
    }
    if (s == "0" || s == "false" || s == "FALSE" || s == "False" || s == "0.0") {
        return 0;
    }
    return std::nullopt;
}

} // namespace detail

/**
 * Parses CSV text into a Dataset. Every column other than the two label
 * columns becomes a feature; cells that do not parse as finite numbers are
 * recorded in the missing mask and hold NaN.
 */
inline Dataset parse_csv(std::istream& in, std::string id, const std::string& heuristic_col, const std::string& realistic_col) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error("csv '" + id + "': missing header row");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3); // UTF-8 BOM
    }
    auto header = detail::split_csv_line(line);
    for (auto& h : header) {
        h = std::string(trim(h));
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& h : header) {
            if (!seen.insert(h).second) {
                throw Error("csv '" + id + "': duplicate header name '" + h + "'");
            }
        }
    }
    auto locate = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw Error("csv '" + id + "': missing label column '" + name + "'");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t hcol = locate(heuristic_col);
    const std::size_t rcol = locate(realistic_col);
    if (hcol == rcol) {
        throw Error("csv '" + id + "': heuristic and realistic label columns must differ");
    }

    std::vector<std::string> names;
    std::vector<std::size_t> feature_pos;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != hcol && j != rcol) {
            names.push_back(header[j]);
            feature_pos.push_back(j);
        }
    }
    std::vector<std::vector<double>> cols(names.size());
    std::vector<std::vector<std::uint8_t>> miss(names.size());
    std::vector<std::uint8_t> heu, real;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error("csv '" + id + "' line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(fields.size()));
        }
        auto h = detail::parse_label(fields[hcol]);
        auto r = detail::parse_label(fields[rcol]);
        if (!h || !r) {
            throw Error("csv '" + id + "' line " + std::to_string(line_no) + ": non-binary label");
        }
        heu.push_back(*h);
        real.push_back(*r);
        for (std::size_t k = 0; k < feature_pos.size(); ++k) {
            double v = 0.0;
            if (parse_double(fields[feature_pos[k]], v)) {
                cols[k].push_back(v);
                miss[k].push_back(0);
            } else {
                cols[k].push_back(std::numeric_limits<double>::quiet_NaN());
                miss[k].push_back(1);
            }
        }
    }
    if (real.empty()) {
        throw Error("csv '" + id + "': zero data rows");
    }
    Dataset ds(std::move(id), std::move(names), std::move(cols), std::move(heu), std::move(real), LabelKind::realistic, std::move(miss));
    ds.heuristic_column = heuristic_col;
    ds.realistic_column = realistic_col;
    return ds;
}

inline Dataset load_csv(const std::filesystem::path& path, const std::string& heuristic_col = "HeuBug",
                        const std::string& realistic_col = "RealBug") {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    return parse_csv(in, path.stem().string(), heuristic_col, realistic_col);
}

/// Writes features then the two label columns. Missing cells are empty;
/// values use the shortest round-trip decimal form.
inline void write_csv(std::ostream& out, const Dataset& ds) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') {
                q += "\"\"";
            } else {
                q += c;
            }
        }
        return q + "\"";
    };
    for (std::size_t j = 0; j < ds.cols(); ++j) {
        out << quote(ds.name(j)) << ',';
    }
    out << quote(ds.heuristic_column) << ',' << quote(ds.realistic_column) << '\n';
    auto heu = ds.labels(LabelKind::heuristic);
    auto real = ds.labels(LabelKind::realistic);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        for (std::size_t j = 0; j < ds.cols(); ++j) {
            if (!ds.is_missing(i, j)) {
                out << format_double(ds.value(i, j));
            }
            out << ',';
        }
        out << static_cast<int>(heu[i]) << ',' << static_cast<int>(real[i]) << '\n';
    }
}

inline void save_csv(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    write_csv(out, ds);
}

} // namespace dqa

#endif
