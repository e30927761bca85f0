#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jet/timeseries.hpp"

namespace jet {

/// In-memory CSV table: named columns of equal length.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

    int find(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }

    const std::vector<double>& column(const std::string& name) const {
        int i = find(name);
        if (i < 0) throw std::invalid_argument("CSV column not found: " + name);
        return columns[static_cast<std::size_t>(i)];
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') { out.push_back(cur); cur.clear(); }
        else if (c != '\r') cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

/// Time stamps are written with 6 fractional digits, data values with
/// enough digits to round-trip relevant precision. Fixed formats keep
/// identical runs byte-identical.
inline void format_cell(std::string& out, double v, bool is_time) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), is_time ? "%.6f" : "%.12g", v);
    out += buf;
}

} // namespace detail

inline void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write CSV file: " + path);
    std::string line;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) line += ',';
        line += table.header[i];
    }
    line += '\n';
    out << line;
    const std::size_t n = table.rows();
    for (std::size_t r = 0; r < n; ++r) {
        line.clear();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) line += ',';
            detail::format_cell(line, table.columns[c][r], table.header[c] == "time");
        }
        line += '\n';
        out << line;
    }
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open CSV file: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("empty CSV file: " + path);
    table.header = detail::split_csv_line(line);
    table.columns.assign(table.header.size(), {});
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split_csv_line(line);
        if (cells.size() != table.header.size())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected " + std::to_string(table.header.size()) +
                                        " cells, got " + std::to_string(cells.size()));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                std::size_t pos = 0;
                double v = std::stod(cells[c], &pos);
                if (pos != cells[c].size()) throw std::invalid_argument("");
                table.columns[c].push_back(v);
            } catch (const std::exception&) {
                throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                            ": not a number: '" + cells[c] + "'");
            }
        }
    }
    return table;
}

/// TimeSeries CSV: header `time,<name>`, one row per sample.
inline void write_timeseries_csv(const std::string& path, const TimeSeries& s) {
    CsvTable t;
    t.header = {"time", s.name};
    t.columns.resize(2);
    t.columns[0].reserve(s.size());
    t.columns[1] = s.values;
    for (std::size_t i = 0; i < s.size(); ++i) t.columns[0].push_back(s.time_at(i));
    write_csv(path, t);
}

/// Checks that a time column is uniformly sampled (jitter <= 1e-9 s) and
/// returns its step. Rejects mixed-rate records.
inline double uniform_step(const std::vector<double>& time, const std::string& what) {
    if (time.size() < 2)
        throw std::invalid_argument(what + ": need at least 2 samples");
    double dt = time[1] - time[0];
    if (!(dt > 0)) throw std::invalid_argument(what + ": time not increasing");
    for (std::size_t i = 1; i + 1 < time.size(); ++i) {
        double d = time[i + 1] - time[i];
        if (std::abs(d - dt) > 1e-9)
            throw std::invalid_argument(what + ": non-uniform sampling at row " +
                                        std::to_string(i + 1));
    }
    return dt;
}

inline TimeSeries read_timeseries_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    if (t.header.size() != 2 || t.header[0] != "time")
        throw std::invalid_argument(path + ": expected header 'time,<name>'");
    TimeSeries s;
    s.name = t.header[1];
    if (t.rows() == 1) {
        s.t0 = t.columns[0][0];
        s.dt = 1.0;
    } else {
        s.dt = uniform_step(t.columns[0], path);
        s.t0 = t.columns[0][0];
    }
    s.values = t.columns[1];
    s.validate();
    return s;
}

} // namespace jet
