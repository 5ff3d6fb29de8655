// Copyright 2026 The qme Authors.
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

#ifndef QME_CSV_HPP
#define QME_CSV_HPP

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace qme::csv {

// Minimal RFC 4180 reader: quoted fields, embedded commas/quotes/newlines,
// CRLF or LF line endings. Rows are returned unfiltered; callers decide what
// a header or an empty line means.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Reads the next record. Returns std::nullopt at end of input.
    /// Throws DataError on a lone quote or an unterminated quoted field.
    std::optional<std::vector<std::string>> next();

    /// 1-based line number where the last returned record started.
    long record_line() const { return record_line_; }

private:
    std::istream& in_;
    long line_ = 1;
    long record_line_ = 0;
};

std::string escape_field(const std::string& field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace qme::csv

#endif  // QME_CSV_HPP
