// Copyright 2026 The seaqtsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seaqtsim/experiments.hpp"

// Curve files: comma-separated values with a commented header block. Plain
// text so any plotting tool can ingest them, and diffable in tests.
//
//   # seaqtsim-curve v1
//   # kind: t1
//   # engine: both
//   # config_hash: 6ba1...
//   # columns: t_us,z_seaqt,z_seaqt_std
//   0,-0.999999,0.001

namespace seaqtsim {

struct CurveFileData {
    std::vector<std::pair<std::string, std::string>> header;  // ordered key/value
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string header_value(const std::string& key) const {
        for (const auto& [k, v] : header) {
            if (k == key) return v;
        }
        throw std::invalid_argument("curve file: missing header '" + key + "'");
    }
    bool has_header(const std::string& key) const {
        for (const auto& [k, v] : header) {
            if (k == key) return true;
        }
        return false;
    }
    int column_index(const std::string& name) const {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (columns[i] == name) return static_cast<int>(i);
        }
        throw std::invalid_argument("curve file: missing column '" + name + "'");
    }
    std::vector<double> column(const std::string& name) const {
        const int idx = column_index(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[idx]);
        return out;
    }
};

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

/// Serialize and atomically replace `path` (write-temp-then-rename).
inline void write_curve_file(const std::string& path, const CurveFileData& data) {
    for (const auto& row : data.rows) {
        if (row.size() != data.columns.size()) {
            throw std::invalid_argument("curve file: row width does not match columns");
        }
    }
    std::ostringstream out;
    out << "# seaqtsim-curve v1\n";
    for (const auto& [k, v] : data.header) out << "# " << k << ": " << v << "\n";
    out << "# columns: ";
    for (std::size_t i = 0; i < data.columns.size(); ++i) {
        if (i) out << ",";
        out << data.columns[i];
    }
    out << "\n";
    for (const auto& row : data.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_value(row[i]);
        }
        out << "\n";
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("curve file: cannot open '" + tmp + "' for writing");
        f << out.str();
        if (!f.good()) throw std::runtime_error("curve file: write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

inline CurveFileData read_curve_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("curve file: cannot open '" + path + "'");
    CurveFileData data;
    std::string line;
    bool saw_magic = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            while (!body.empty() && body.front() == ' ') body.erase(body.begin());
            if (!saw_magic) {
                if (body.rfind("seaqtsim-curve", 0) != 0) {
                    throw std::runtime_error("curve file: '" + path + "' has no magic header");
                }
                saw_magic = true;
                continue;
            }
            const auto colon = body.find(':');
            if (colon == std::string::npos) continue;
            std::string key = body.substr(0, colon);
            std::string value = body.substr(colon + 1);
            while (!value.empty() && value.front() == ' ') value.erase(value.begin());
            if (key == "columns") {
                std::stringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) data.columns.push_back(tok);
            } else {
                data.header.emplace_back(key, value);
            }
            continue;
        }
        if (data.columns.empty()) {
            throw std::runtime_error("curve file: data before '# columns' header at line " +
                                     std::to_string(lineno));
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                row.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw std::runtime_error("curve file: bad number '" + tok + "' at line " +
                                         std::to_string(lineno));
            }
        }
        if (row.size() != data.columns.size()) {
            throw std::runtime_error("curve file: row width mismatch at line " +
                                     std::to_string(lineno));
        }
        data.rows.push_back(std::move(row));
    }
    if (!saw_magic) throw std::runtime_error("curve file: '" + path + "' is empty");
    return data;
}

/// Assemble the on-disk table from experiment curves plus header metadata.
inline CurveFileData to_curve_file(const ExperimentCurves& curves,
                                   std::vector<std::pair<std::string, std::string>> header) {
    CurveFileData data;
    data.header = std::move(header);
    data.columns.push_back("t_us");
    for (const auto& col : curves.columns) {
        data.columns.push_back(col.name);
        data.columns.push_back(col.name + "_std");
    }
    for (std::size_t i = 0; i < curves.t_us.size(); ++i) {
        std::vector<double> row;
        row.push_back(curves.t_us[i]);
        for (const auto& col : curves.columns) {
            row.push_back(col.value[i]);
            row.push_back(col.std[i]);
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

}  // namespace seaqtsim
