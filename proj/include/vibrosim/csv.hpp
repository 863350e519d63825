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

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vibrosim/propagator.hpp"

namespace vibrosim {

// Rectangular numeric table written with a one-line header and 9 significant
// digits in scientific notation. Integer columns are written as integers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<bool> integer_columns;  // optional; defaults to all-false
    // When set, the first column must be strictly increasing (a time axis).
    bool time_ordered = true;

    void validate() const;
    void write(std::ostream& out) const;
    std::string str() const;
};

// t_fs [, t_ion_ms], then the series columns in insertion order.
// t_ion_ms = t_fs * 1e-15 / F * 1e3 is emitted when a scaling factor is given.
CsvTable to_table(const TimeSeries& series, std::optional<double> scaling = std::nullopt);

}  // namespace vibrosim
