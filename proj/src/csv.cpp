// Copyright 2026 The vibrosim Authors
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

#include "vibrosim/csv.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace vibrosim {
namespace {
constexpr std::string_view kModule = "cli_io";
}

void CsvTable::validate() const {
    if (header.empty()) throw Error(kModule, "CSV table has no columns");
    if (!integer_columns.empty() && integer_columns.size() != header.size()) {
        throw Error(kModule, "integer column mask does not match the header");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != header.size()) throw Error(kModule, fmt::format("CSV row {} is not rectangular", r));
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (!std::isfinite(rows[r][c])) {
                throw Error(kModule, fmt::format("non-finite value in column '{}' at row {}", header[c], r));
            }
        }
        if (time_ordered && r > 0 && !(rows[r][0] > rows[r - 1][0])) {
            throw Error(kModule, fmt::format("first column not strictly increasing at row {}", r));
        }
    }
}

void CsvTable::write(std::ostream& out) const {
    validate();
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            if (!integer_columns.empty() && integer_columns[c]) {
                out << fmt::format("{}", static_cast<long long>(std::llround(row[c])));
            } else {
                out << fmt::format("{:.8e}", row[c]);
            }
        }
        out << '\n';
    }
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

CsvTable to_table(const TimeSeries& series, std::optional<double> scaling) {
    CsvTable table;
    table.header.push_back("t_fs");
    if (scaling) table.header.push_back("t_ion_ms");
    for (const auto& [name, values] : series.columns()) table.header.push_back(name);
    table.rows.reserve(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        std::vector<double> row;
        row.reserve(table.header.size());
        const double t = series.times()[k];
        row.push_back(t);
        if (scaling) row.push_back(t * 1e-15 / *scaling * 1e3);
        for (const auto& column : series.columns()) row.push_back(column.second[k]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace vibrosim
