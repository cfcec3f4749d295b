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

#ifndef CRISISLENS_FEATURES_HPP
#define CRISISLENS_FEATURES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "crisislens/core.hpp"
#include "crisislens/preprocess.hpp"

namespace crisislens {

// Sparse vector: (term index, value) pairs sorted by index.
using SparseVec = std::vector<std::pair<std::uint32_t, double>>;

struct SparseMatrix {
    std::vector<SparseVec> rows;
    std::size_t cols = 0;
};

struct NgramRange {
    int lo = 1;
    int hi = 2;
};

// Frozen n-gram vocabulary. Terms are held in lexicographic order; bigrams
// join adjacent tokens with a single space.
struct Vocabulary {
    std::vector<std::string> terms;
    std::vector<std::size_t> df;     // document frequency per term
    std::size_t n_docs = 0;          // fit-corpus size, freezes idf
    std::size_t max_features = 10000;
    NgramRange ngram_range;

    std::unordered_map<std::string, std::uint32_t> index;

    void rebuild_index() {
        index.clear();
        index.reserve(terms.size() * 2);
        for (std::uint32_t i = 0; i < terms.size(); ++i) index[terms[i]] = i;
    }

    double idf(std::size_t term) const {
        return std::log((1.0 + static_cast<double>(n_docs)) /
                        (1.0 + static_cast<double>(df[term]))) + 1.0;
    }

    // FNV-1a over the term list; pins models to the vocabulary they used.
    std::string digest() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&](const std::string& s) {
            for (unsigned char c : s) {
                h ^= c;
                h *= 1099511628211ull;
            }
            h ^= 0x1F;
            h *= 1099511628211ull;
        };
        for (const std::string& t : terms) mix(t);
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }
};

namespace detail {
inline void for_each_ngram(const std::vector<std::string>& tokens, const NgramRange& r,
                           const std::function<void(const std::string&)>& fn) {
    for (int n = r.lo; n <= r.hi; ++n) {
        if (n < 1 || tokens.size() < static_cast<std::size_t>(n)) continue;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string g = tokens[i];
            for (std::size_t j = 1; j < static_cast<std::size_t>(n); ++j) {
                g += ' ';
                g += tokens[i + j];
            }
            fn(g);
        }
    }
}
}  // namespace detail

// Top-`max_features` n-grams by total corpus frequency, ties broken
// lexicographically (smaller term wins). Order-insensitive in the corpus.
inline Vocabulary build_vocabulary(const std::vector<TokenizedDoc>& docs,
                                   NgramRange ngram_range = {1, 2},
                                   std::size_t max_features = 10000) {
    if (docs.empty()) throw ValidationError("build_vocabulary: empty corpus");
    std::map<std::string, std::pair<std::size_t, std::size_t>> stats;  // term -> (freq, df)
    for (const TokenizedDoc& d : docs) {
        std::map<std::string, std::size_t> local;
        detail::for_each_ngram(d.tokens, ngram_range,
                               [&](const std::string& g) { ++local[g]; });
        for (const auto& [term, cnt] : local) {
            auto& s = stats[term];
            s.first += cnt;
            s.second += 1;
        }
    }
    if (stats.empty())
        throw ValidationError("build_vocabulary: no n-grams (all documents empty)");

    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> items(
        stats.begin(), stats.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second.first != b.second.first) return a.second.first > b.second.first;
        return a.first < b.first;
    });
    if (items.size() > max_features) items.resize(max_features);
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    Vocabulary vocab;
    vocab.n_docs = docs.size();
    vocab.max_features = max_features;
    vocab.ngram_range = ngram_range;
    vocab.terms.reserve(items.size());
    vocab.df.reserve(items.size());
    for (auto& [term, s] : items) {
        vocab.terms.push_back(term);
        vocab.df.push_back(s.second);
    }
    vocab.rebuild_index();
    return vocab;
}

// Exact in-vocabulary n-gram occurrence counts; OOV n-grams ignored.
inline SparseVec counts(const TokenizedDoc& doc, const Vocabulary& vocab) {
    std::map<std::uint32_t, double> acc;
    detail::for_each_ngram(doc.tokens, vocab.ngram_range, [&](const std::string& g) {
        auto it = vocab.index.find(g);
        if (it != vocab.index.end()) acc[it->second] += 1.0;
    });
    return SparseVec(acc.begin(), acc.end());
}

inline SparseMatrix count_matrix(const std::vector<TokenizedDoc>& docs,
                                 const Vocabulary& vocab) {
    SparseMatrix m;
    m.cols = vocab.terms.size();
    m.rows.reserve(docs.size());
    for (const TokenizedDoc& d : docs) m.rows.push_back(counts(d, vocab));
    return m;
}

// tf * idf with idf = ln((1+N)/(1+df)) + 1 frozen at fit time, rows L2
// normalized (all-zero rows stay zero).
inline SparseMatrix tfidf_transform(const SparseMatrix& counts_matrix,
                                    const Vocabulary& vocab) {
    SparseMatrix out;
    out.cols = counts_matrix.cols;
    out.rows.reserve(counts_matrix.rows.size());
    for (const SparseVec& row : counts_matrix.rows) {
        SparseVec w;
        w.reserve(row.size());
        double norm2 = 0.0;
        for (const auto& [idx, tf] : row) {
            double v = tf * vocab.idf(idx);
            w.emplace_back(idx, v);
            norm2 += v * v;
        }
        if (norm2 > 0) {
            double inv = 1.0 / std::sqrt(norm2);
            for (auto& [idx, v] : w) v *= inv;
        }
        out.rows.push_back(std::move(w));
    }
    return out;
}

inline nlohmann::ordered_json vocabulary_to_json(const Vocabulary& v) {
    nlohmann::ordered_json j;
    j["terms"] = v.terms;
    j["df"] = v.df;
    j["n_docs"] = v.n_docs;
    j["max_features"] = v.max_features;
    j["ngram_range"] = {v.ngram_range.lo, v.ngram_range.hi};
    return j;
}

inline Vocabulary vocabulary_from_json(const nlohmann::json& j) {
    Vocabulary v;
    v.terms = j.at("terms").get<std::vector<std::string>>();
    v.df = j.at("df").get<std::vector<std::size_t>>();
    v.n_docs = j.at("n_docs").get<std::size_t>();
    v.max_features = j.at("max_features").get<std::size_t>();
    v.ngram_range.lo = j.at("ngram_range")[0].get<int>();
    v.ngram_range.hi = j.at("ngram_range")[1].get<int>();
    if (v.df.size() != v.terms.size())
        throw ValidationError("vocabulary JSON: df/terms length mismatch");
    v.rebuild_index();
    return v;
}

}  // namespace crisislens

#endif  // CRISISLENS_FEATURES_HPP
