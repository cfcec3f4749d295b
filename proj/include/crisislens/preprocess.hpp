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

#ifndef CRISISLENS_PREPROCESS_HPP
#define CRISISLENS_PREPROCESS_HPP

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "crisislens/core.hpp"
#include "crisislens/corpus.hpp"
#include "crisislens/unicode.hpp"

namespace crisislens {

// Stage 1: NFC-normalize, replace punctuation/symbol codepoints (incl. danda
// and double danda) with spaces, collapse whitespace runs, trim. Idempotent.
inline std::string strip_punctuation(const std::string& text) {
    std::vector<char32_t> cps = decode_utf8(nfc(text));
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    bool any = false;
    for (char32_t cp : cps) {
        if (is_whitespace(cp) || is_punct_or_symbol(cp)) {
            pending_space = true;
            continue;
        }
        if (pending_space && any) out.push_back(' ');
        pending_space = false;
        any = true;
        append_utf8(out, cp);
    }
    return out;
}

// Stage 2: split on Unicode whitespace; no empty tokens.
inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<char32_t> cps = decode_utf8(text);
    std::vector<std::string> tokens;
    std::string cur;
    for (char32_t cp : cps) {
        if (is_whitespace(cp)) {
            if (!cur.empty()) tokens.push_back(std::move(cur));
            cur.clear();
        } else {
            append_utf8(cur, cp);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

// Stage 3: order-preserving exact-match removal.
inline std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                                 const std::unordered_set<std::string>& stoplist) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens)
        if (!stoplist.count(t)) out.push_back(t);
    return out;
}

// Stoplist file: one token per line, '#' comments, entries NFC-normalized.
inline std::unordered_set<std::string> load_stoplist(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open stoplist '" + path + "'");
    std::unordered_set<std::string> stop;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        for (const std::string& t : tokenize(line)) stop.insert(nfc(t));
    }
    return stop;
}

// One suffix rule: strip `suffix` when the remaining stem keeps at least
// `min_stem_len` codepoints, then append `replacement` (usually empty).
struct StemRule {
    std::vector<char32_t> suffix;
    std::size_t min_stem_len = 2;
    std::vector<char32_t> replacement;
};

struct StemmerRules {
    std::vector<StemRule> rules;  // sorted by descending suffix length
    bool multi_pass = false;

    void sort_rules() {
        std::stable_sort(rules.begin(), rules.end(),
                         [](const StemRule& a, const StemRule& b) {
                             return a.suffix.size() > b.suffix.size();
                         });
    }
};

// Rules file: UTF-8 TSV `suffix<TAB>min_stem_len[<TAB>replacement]`, ordered.
// The optional third column covers inflections whose root restores a vowel
// sign (e.g. -iye -> -a); blank lines and '#' comments allowed.
inline StemmerRules load_stemmer_rules(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open stemmer rules '" + path + "'");
    StemmerRules rules;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        while (true) {
            auto tab = line.find('\t', start);
            cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() < 2)
            throw ValidationError("stemmer rules line " + std::to_string(lineno) +
                                  ": need suffix<TAB>min_stem_len");
        StemRule r;
        r.suffix = decode_utf8(nfc(cols[0]));
        try {
            r.min_stem_len = static_cast<std::size_t>(std::stoul(cols[1]));
        } catch (...) {
            throw ValidationError("stemmer rules line " + std::to_string(lineno) +
                                  ": bad min_stem_len '" + cols[1] + "'");
        }
        if (cols.size() > 2) r.replacement = decode_utf8(nfc(cols[2]));
        if (r.suffix.empty())
            throw ValidationError("stemmer rules line " + std::to_string(lineno) +
                                  ": empty suffix");
        rules.rules.push_back(std::move(r));
    }
    rules.sort_rules();
    return rules;
}

namespace detail {
inline bool ends_with(const std::vector<char32_t>& cps, const std::vector<char32_t>& suffix) {
    if (suffix.size() > cps.size()) return false;
    return std::equal(suffix.rbegin(), suffix.rend(), cps.rbegin());
}
}  // namespace detail

// Stage 4: apply the first (longest-suffix) rule that matches and leaves a
// long enough stem. Single pass strips at most one suffix; multi_pass
// reapplies until no rule fires.
inline std::string stem(const std::string& token, const StemmerRules& rules) {
    std::vector<char32_t> cps = decode_utf8(token);
    bool changed = true;
    bool any = false;
    while (changed) {
        changed = false;
        for (const StemRule& r : rules.rules) {
            if (!detail::ends_with(cps, r.suffix)) continue;
            std::size_t remaining = cps.size() - r.suffix.size();
            if (remaining < r.min_stem_len) continue;
            cps.resize(remaining);
            cps.insert(cps.end(), r.replacement.begin(), r.replacement.end());
            changed = true;
            any = true;
            break;
        }
        if (!rules.multi_pass) break;
    }
    return any ? encode_utf8(cps) : token;
}

struct PreprocessConfig {
    std::unordered_set<std::string> stoplist;
    StemmerRules rules;
    bool keep_stage_trace = false;
};

struct TokenizedDoc {
    std::string record_id;
    std::vector<std::string> tokens;
    std::vector<std::vector<std::string>> stage_trace;  // optional per-stage snapshots
};

// The four stages in fixed order; deterministic.
inline TokenizedDoc run_pipeline(const std::string& record_id, const std::string& text,
                                 const PreprocessConfig& cfg) {
    TokenizedDoc doc;
    doc.record_id = record_id;
    std::string stripped = strip_punctuation(text);
    std::vector<std::string> toks = tokenize(stripped);
    if (cfg.keep_stage_trace) doc.stage_trace.push_back(toks);
    toks = remove_stopwords(toks, cfg.stoplist);
    if (cfg.keep_stage_trace) doc.stage_trace.push_back(toks);
    for (std::string& t : toks) t = stem(t, cfg.rules);
    doc.tokens = std::move(toks);
    if (cfg.keep_stage_trace) doc.stage_trace.push_back(doc.tokens);
    return doc;
}

inline TokenizedDoc run_pipeline(const Headline& h, const PreprocessConfig& cfg) {
    return run_pipeline(h.id, h.text, cfg);
}

}  // namespace crisislens

#endif  // CRISISLENS_PREPROCESS_HPP
