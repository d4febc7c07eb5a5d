// Copyright 2026 The spintwist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPINTWIST_CSV_HPP
#define SPINTWIST_CSV_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace spintwist {

using CsvRow = std::vector<std::string>;

/// Shortest decimal string that round-trips the value.
std::string csv_number(double value);
std::string csv_number(int value);
std::string csv_number(std::int64_t value);

/// Writes header + rows to `path` via a temporary file and rename, so
/// readers never observe a partial table.
void write_csv_atomic(const std::string& path, const CsvRow& header,
                      const std::vector<CsvRow>& rows);

}  // namespace spintwist

#endif
