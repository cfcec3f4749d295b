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

#ifndef CRISISLENS_CORPUS_HPP
#define CRISISLENS_CORPUS_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "crisislens/core.hpp"
#include "crisislens/csv.hpp"
#include "crisislens/unicode.hpp"

namespace crisislens {

// One annotator's vote on a record.
struct Annotation {
    std::string annotator_id;
    Sentiment label;

    bool operator==(const Annotation&) const = default;
};

// One dated, sourced, possibly multi-annotated news headline.
struct Headline {
    std::string id;
    std::string text;
    Timestamp timestamp;
    std::string source;
    std::optional<Sentiment> label;
    std::vector<Annotation> annotations;

    // provenance set on augmentation-generated records
    std::optional<std::string> source_id;
    std::optional<std::string> provider_name;

    bool operator==(const Headline&) const = default;
};

using Corpus = std::vector<Headline>;

struct Reject {
    std::size_t line_number;
    std::string reason;
};

struct IngestResult {
    Corpus corpus;
    std::vector<Reject> rejects;
};

enum class CorpusFormat { Csv, Jsonl };

struct RelevanceConfig {
    std::vector<std::string> keywords;
    Date window_start{2024, 7, 5};
    Date window_end{2024, 8, 30};
    double keyword_weight = 0.5;
    double temporal_weight = 0.5;
    double threshold = 0.5;

    void validate() const {
        if (std::abs(keyword_weight + temporal_weight - 1.0) > 1e-9)
            throw ValidationError("relevance weights must sum to 1");
        if (keyword_weight < 0 || temporal_weight < 0)
            throw ValidationError("relevance weights must be nonnegative");
        if (window_start > window_end)
            throw ValidationError("relevance window start after end");
    }
};

namespace detail {

inline const std::vector<std::string> kColumns = {
    "id", "text", "timestamp", "source", "label",
    "annotator_1", "annotator_2", "annotator_3"};

// Builds a Headline from raw field strings; empty optional fields are "".
inline std::optional<std::string> build_headline(
    const std::string& id, const std::string& text, const std::string& timestamp,
    const std::string& source, const std::string& label,
    const std::vector<std::string>& annotator_votes, Headline& out) {
    if (id.empty()) return "missing id";
    std::string norm = nfc(text);
    bool blank = true;
    for (char32_t cp : decode_utf8(norm))
        if (!is_whitespace(cp)) { blank = false; break; }
    if (blank) return "text empty after normalization";
    auto ts = parse_timestamp(timestamp);
    if (!ts) return "unparseable timestamp '" + timestamp + "'";
    out.id = id;
    out.text = text;
    out.timestamp = *ts;
    out.source = source;
    out.label.reset();
    out.annotations.clear();
    if (!label.empty()) {
        auto s = parse_sentiment(label);
        if (!s) return "unknown label '" + label + "'";
        out.label = *s;
    }
    for (std::size_t i = 0; i < annotator_votes.size(); ++i) {
        if (annotator_votes[i].empty()) continue;
        auto s = parse_sentiment(annotator_votes[i]);
        if (!s) return "unknown annotator label '" + annotator_votes[i] + "'";
        out.annotations.push_back({"annotator_" + std::to_string(i + 1), *s});
    }
    return std::nullopt;
}

}  // namespace detail

inline IngestResult ingest_csv(std::istream& in) {
    IngestResult result;
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::size_t line = 0;
    if (!reader.next(fields, line)) throw ValidationError("empty CSV: header row required");

    // strip a UTF-8 BOM if present
    if (!fields.empty() && fields[0].size() >= 3 &&
        static_cast<unsigned char>(fields[0][0]) == 0xEF)
        fields[0].erase(0, 3);

    std::vector<int> col(detail::kColumns.size(), -1);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        for (std::size_t c = 0; c < detail::kColumns.size(); ++c)
            if (fields[i] == detail::kColumns[c]) col[c] = static_cast<int>(i);
    }
    for (std::size_t c = 0; c < 4; ++c)
        if (col[c] < 0)
            throw ValidationError("CSV missing required column '" + detail::kColumns[c] + "'");

    auto get = [&](const std::vector<std::string>& row, int idx) -> std::string {
        return (idx >= 0 && static_cast<std::size_t>(idx) < row.size()) ? row[idx] : "";
    };

    std::unordered_set<std::string> ids;
    while (reader.next(fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        Headline h;
        auto err = detail::build_headline(
            get(fields, col[0]), get(fields, col[1]), get(fields, col[2]),
            get(fields, col[3]), get(fields, col[4]),
            {get(fields, col[5]), get(fields, col[6]), get(fields, col[7])}, h);
        if (err) {
            result.rejects.push_back({line, *err});
            continue;
        }
        if (!ids.insert(h.id).second)
            throw ValidationError("duplicate id '" + h.id + "' at line " +
                                  std::to_string(line));
        result.corpus.push_back(std::move(h));
    }
    return result;
}

inline IngestResult ingest_jsonl(std::istream& in) {
    IngestResult result;
    std::unordered_set<std::string> ids;
    std::string linestr;
    std::size_t line = 0;
    while (std::getline(in, linestr)) {
        ++line;
        if (linestr.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(linestr, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.rejects.push_back({line, "invalid JSON object"});
            continue;
        }
        auto str = [&](const char* key) -> std::string {
            auto it = j.find(key);
            if (it == j.end() || it->is_null()) return "";
            if (!it->is_string()) return "";
            return it->get<std::string>();
        };
        for (const char* req : {"id", "text", "timestamp", "source"}) {
            if (!j.contains(req)) {
                result.rejects.push_back({line, std::string("missing key '") + req + "'"});
                goto next_line;
            }
        }
        {
            Headline h;
            auto err = detail::build_headline(
                str("id"), str("text"), str("timestamp"), str("source"), str("label"),
                {str("annotator_1"), str("annotator_2"), str("annotator_3")}, h);
            if (err) {
                result.rejects.push_back({line, *err});
                continue;
            }
            if (j.contains("source_id") && j["source_id"].is_string())
                h.source_id = j["source_id"].get<std::string>();
            if (j.contains("provider_name") && j["provider_name"].is_string())
                h.provider_name = j["provider_name"].get<std::string>();
            if (!ids.insert(h.id).second)
                throw ValidationError("duplicate id '" + h.id + "' at line " +
                                      std::to_string(line));
            result.corpus.push_back(std::move(h));
        }
    next_line:;
    }
    return result;
}

inline IngestResult ingest(const std::string& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open corpus file '" + path + "'");
    return format == CorpusFormat::Csv ? ingest_csv(in) : ingest_jsonl(in);
}

// Canonical JSONL writer: one object per line, keys in column order.
// ingest(export(c)) == c for any valid corpus.
inline void export_jsonl(const Corpus& corpus, std::ostream& out) {
    for (const Headline& h : corpus) {
        nlohmann::ordered_json j;
        j["id"] = h.id;
        j["text"] = h.text;
        j["timestamp"] = h.timestamp.to_string();
        j["source"] = h.source;
        if (h.label) j["label"] = std::string(to_string(*h.label));
        for (const Annotation& a : h.annotations) j[a.annotator_id] = to_string(a.label);
        if (h.source_id) j["source_id"] = *h.source_id;
        if (h.provider_name) j["provider_name"] = *h.provider_name;
        out << j.dump() << '\n';
    }
}

inline void write_rejects(const std::vector<Reject>& rejects, std::ostream& out) {
    for (const Reject& r : rejects) {
        nlohmann::ordered_json j;
        j["line_number"] = r.line_number;
        j["reason"] = r.reason;
        out << j.dump() << '\n';
    }
}

// phi_rel: convex combination of keyword coverage and the in-window
// indicator. Keywords match as substrings of the NFC-normalized text.
inline double relevance_score(const Headline& h, const RelevanceConfig& cfg) {
    double kscore = 0.0;
    if (!cfg.keywords.empty()) {
        std::string text = nfc(h.text);
        std::set<std::string> matched;
        for (const std::string& kw : cfg.keywords) {
            std::string k = nfc(kw);
            if (!k.empty() && text.find(k) != std::string::npos) matched.insert(k);
        }
        kscore = static_cast<double>(matched.size()) / static_cast<double>(cfg.keywords.size());
    }
    double tscore =
        (h.timestamp.date >= cfg.window_start && h.timestamp.date <= cfg.window_end) ? 1.0
                                                                                     : 0.0;
    return cfg.keyword_weight * kscore + cfg.temporal_weight * tscore;
}

// D_filtered: records scoring strictly above the threshold, input order kept.
inline Corpus filter_corpus(const Corpus& corpus, const RelevanceConfig& cfg) {
    cfg.validate();
    Corpus out;
    for (const Headline& h : corpus)
        if (relevance_score(h, cfg) > cfg.threshold) out.push_back(h);
    return out;
}

}  // namespace crisislens

#endif  // CRISISLENS_CORPUS_HPP
