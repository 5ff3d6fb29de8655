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

#include "qme/csv.hpp"

#include <sstream>

#include "qme/errors.hpp"

namespace qme::csv {

std::optional<std::vector<std::string>> Reader::next() {
    int c = in_.get();
    if (c == EOF) {
        return std::nullopt;
    }

    record_line_ = line_;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;

    while (true) {
        if (c == EOF) {
            if (quoted) {
                throw DataError("csv: unterminated quoted field starting near line " +
                                std::to_string(record_line_));
            }
            fields.push_back(std::move(field));
            return fields;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                if (in_.peek() == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
        } else if (ch == '"') {
            if (!field.empty()) {
                throw DataError("csv: stray quote in unquoted field at line " +
                                std::to_string(line_));
            }
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (ch == '\r' && in_.peek() == '\n') {
            // handled by the '\n' branch on the next iteration
        } else if (ch == '\n') {
            ++line_;
            fields.push_back(std::move(field));
            return fields;
        } else {
            field.push_back(ch);
        }
        c = in_.get();
    }
}

std::string escape_field(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) {
        return field;
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::ostringstream out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << escape_field(fields[i]);
    }
    out << '\n';
    return out.str();
}

}  // namespace qme::csv
