// Copyright 2025 The CrisisLens Authors
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

#ifndef CRISISLENS_CSV_HPP
#define CRISISLENS_CSV_HPP

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace crisislens {

// RFC 4180 style CSV: quoted fields, doubled quotes, CRLF, and embedded
// newlines inside quoted fields.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads one record; returns false at EOF. `line_number` is the 1-based
    // line the record started on (quoted fields may span lines).
    bool next(std::vector<std::string>& fields, std::size_t& line_number) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;
        line_number = line_ + 1;
        std::string field;
        bool quoted = false;
        while (true) {
            if (c == EOF) {
                fields.push_back(std::move(field));
                ++line_;
                return true;
            }
            char ch = static_cast<char>(c);
            if (quoted) {
                if (ch == '"') {
                    int peek = in_.peek();
                    if (peek == '"') {
                        field.push_back('"');
                        in_.get();
                    } else {
                        quoted = false;
                    }
                } else {
                    if (ch == '\n') ++line_;
                    field.push_back(ch);
                }
            } else if (ch == '"' && field.empty()) {
                quoted = true;
            } else if (ch == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\r') {
                if (in_.peek() == '\n') in_.get();
                fields.push_back(std::move(field));
                ++line_;
                return true;
            } else if (ch == '\n') {
                fields.push_back(std::move(field));
                ++line_;
                return true;
            } else {
                field.push_back(ch);
            }
            c = in_.get();
        }
    }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

inline std::string csv_quote(const std::string& field) {
    bool needs = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') { needs = true; break; }
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << csv_quote(fields[i]);
    }
    out.put('\n');
}

}  // namespace crisislens

#endif  // CRISISLENS_CSV_HPP
