/* Copyright 2026 The fidspec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fidspec/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fidspec {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        std::ostringstream msg;
        msg << "row arity " << row.size() << " does not match schema arity "
            << columns_.size();
        throw std::invalid_argument(msg.str());
    }
    rows_.push_back(std::move(row));
}

std::size_t Table::column(const std::string &name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    throw std::out_of_range("no column named '" + name + "'");
}

double Table::at(std::size_t row, const std::string &name) const {
    return rows_.at(row).at(column(name));
}

std::string format_value(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string to_csv(const Table &table) {
    std::string out;
    const auto &cols = table.columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    out += '\n';
    for (const auto &row : table.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_value(row[i]);
        }
        out += '\n';
    }
    return out;
}

void emit_csv(const Table &table, const std::filesystem::path &path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const std::string body = to_csv(table);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    f.close();
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

Table read_csv(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error(path.string() + " has no header");
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
    }
    Table t(cols);
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace fidspec
