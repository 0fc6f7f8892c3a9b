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

#ifndef FIDSPEC_TABLE_HPP
#define FIDSPEC_TABLE_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace fidspec {

/// Numeric table with a fixed column schema; every row has the schema's arity.
class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    void add_row(std::vector<double> row);

    const std::vector<std::string> &columns() const noexcept { return columns_; }
    const std::vector<std::vector<double>> &rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

    /// Index of a column by name; throws std::out_of_range.
    std::size_t column(const std::string &name) const;
    double at(std::size_t row, const std::string &name) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Formats one value with 12 significant digits.
std::string format_value(double x);

/// Header line plus one line per row, comma separated, '\n' terminated.
std::string to_csv(const Table &table);

/// Writes to_csv(table) to path. Throws std::runtime_error on I/O failure.
void emit_csv(const Table &table, const std::filesystem::path &path);

/// Parses a file produced by emit_csv.
Table read_csv(const std::filesystem::path &path);

}  // namespace fidspec

#endif  // FIDSPEC_TABLE_HPP
