#include "etp/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace etp {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(std::string_view s) {
    const auto* first = s.begin();
    const auto* last = s.end();
    while (first != last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last != first && std::isspace(static_cast<unsigned char>(*(last - 1)))) --last;
    return std::string(first, last);
}

bool is_missing_token(const std::string& s) {
    if (s.empty()) return true;
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return lower == "na" || lower == "nan";
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Canonical shortest round-trip formatting for doubles.
std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

FluxDataset parse_csv(std::istream& in, const SiteMeta& meta,
                      const CsvSchemaConfig& cfg) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("CSV input is empty");
    const auto header = split_line(line);

    std::size_t ts_col = header.size();
    std::vector<std::string> feature_names;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (name == cfg.timestamp_column) {
            ts_col = c;
            continue;
        }
        const auto it = cfg.column_renames.find(name);
        feature_names.push_back(it != cfg.column_renames.end() ? it->second : name);
        feature_cols.push_back(c);
    }
    if (ts_col == header.size())
        throw std::invalid_argument("CSV has no timestamp column '" +
                                    cfg.timestamp_column + "'");

    const TimePoint offset =
        static_cast<TimePoint>(std::llround(cfg.utc_offset_hours * 3600.0));

    struct Row {
        TimePoint ts;
        std::vector<std::optional<double>> values;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("row " + std::to_string(line_no) + " has " +
                                        std::to_string(cells.size()) +
                                        " cells, header has " +
                                        std::to_string(header.size()));
        Row row;
        const std::string ts_text = trim(cells[ts_col]);
        if (cfg.timestamp_format == TimestampFormat::iso8601) {
            const auto t = parse_iso8601(ts_text);
            if (!t)
                throw std::invalid_argument("row " + std::to_string(line_no) +
                                            ": bad ISO-8601 timestamp '" + ts_text + "'");
            row.ts = *t - offset;
        } else {
            const auto v = parse_number(ts_text);
            if (!v)
                throw std::invalid_argument("row " + std::to_string(line_no) +
                                            ": bad epoch timestamp '" + ts_text + "'");
            row.ts = static_cast<TimePoint>(std::llround(*v)) - offset;
        }
        row.values.reserve(feature_cols.size());
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const std::string cell = trim(cells[feature_cols[j]]);
            if (is_missing_token(cell)) {
                row.values.emplace_back(std::nullopt);
                continue;
            }
            const auto v = parse_number(cell);
            if (!v)
                throw std::invalid_argument("row " + std::to_string(line_no) +
                                            ", column '" + feature_names[j] +
                                            "': non-numeric cell '" + cell + "'");
            if (*v == -9999.0)
                row.values.emplace_back(std::nullopt);
            else
                row.values.emplace_back(*v);
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.ts < b.ts; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].ts == rows[i - 1].ts)
            throw std::invalid_argument("duplicate timestamp " +
                                        format_iso8601(rows[i].ts + offset) +
                                        " in CSV input");
    }

    std::vector<TimePoint> timestamps;
    timestamps.reserve(rows.size());
    for (const auto& r : rows) timestamps.push_back(r.ts);

    FluxDataset ds(meta, std::move(timestamps), feature_names);
    for (std::size_t j = 0; j < feature_names.size(); ++j) {
        auto& col = ds.column_at(ds.feature_index(feature_names[j]));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].values[j]) col.set(i, *rows[i].values[j]);
        }
    }
    return ds;
}

void serialize_csv(const FluxDataset& ds, std::ostream& out) {
    out << "timestamp";
    for (const auto& f : ds.schema()) out << ',' << f;
    out << '\n';
    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        out << format_iso8601(ds.timestamps()[i]);
        for (std::size_t c = 0; c < ds.schema().size(); ++c) {
            out << ',';
            const auto v = ds.column_at(c).get(i);
            if (v) out << format_double(*v);
        }
        out << '\n';
    }
}

FluxDataset load_csv_file(const std::string& path, const SiteMeta& meta,
                          const CsvSchemaConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file '" + path + "'");
    return parse_csv(in, meta, cfg);
}

void save_csv_file(const FluxDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file '" + path + "'");
    serialize_csv(ds, out);
}

}  // namespace etp
