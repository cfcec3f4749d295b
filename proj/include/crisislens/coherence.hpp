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

#ifndef CRISISLENS_COHERENCE_HPP
#define CRISISLENS_COHERENCE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "crisislens/core.hpp"
#include "crisislens/preprocess.hpp"

namespace crisislens {

struct CoherenceResult {
    double score = 0.0;                 // mean over topics
    std::vector<double> per_topic;
    std::vector<std::string> absent_words;    // topic words never seen in the corpus
    std::vector<std::size_t> degenerate_topics;  // fewer than 2 distinct words
};

namespace detail {

struct WindowCounts {
    std::map<std::string, std::size_t> occur;
    std::map<std::pair<std::string, std::string>, std::size_t> cooccur;  // key ordered
    std::size_t total = 0;

    double p(const std::string& w) const {
        auto it = occur.find(w);
        return it == occur.end() ? 0.0
                                 : static_cast<double>(it->second) / static_cast<double>(total);
    }
    double p(const std::string& a, const std::string& b) const {
        if (a == b) return p(a);
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = cooccur.find(key);
        return it == cooccur.end()
                   ? 0.0
                   : static_cast<double>(it->second) / static_cast<double>(total);
    }
};

// Boolean sliding windows of `window` tokens per document (whole document
// when shorter), counting only the tracked words.
inline WindowCounts count_windows(const std::vector<std::vector<std::string>>& docs,
                                  const std::set<std::string>& tracked, std::size_t window) {
    WindowCounts wc;
    for (const auto& doc : docs) {
        std::size_t n_windows = doc.size() <= window ? 1 : doc.size() - window + 1;
        for (std::size_t s = 0; s < n_windows; ++s) {
            std::size_t len = std::min(window, doc.size() - s);
            std::set<std::string> present;
            for (std::size_t j = s; j < s + len; ++j)
                if (tracked.count(doc[j])) present.insert(doc[j]);
            for (auto it = present.begin(); it != present.end(); ++it) {
                wc.occur[*it] += 1;
                for (auto jt = std::next(it); jt != present.end(); ++jt)
                    wc.cooccur[{*it, *jt}] += 1;
            }
            wc.total += 1;
        }
    }
    return wc;
}

inline double npmi(const WindowCounts& wc, const std::string& a, const std::string& b,
                   double eps) {
    double pa = wc.p(a), pb = wc.p(b);
    if (pa == 0.0 || pb == 0.0) return 0.0;
    double pj = wc.p(a, b);
    double den = -std::log(pj + eps);
    if (den <= 0.0) return 1.0;  // pair present in every window
    return std::log((pj + eps) / (pa * pb)) / den;
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

}  // namespace detail

// C_v topic coherence: boolean sliding windows, NPMI against the full
// top-word set (one-set segmentation), indirect cosine similarity of the
// NPMI context vectors, arithmetic mean over words then topics.
inline CoherenceResult coherence_cv(const std::vector<std::vector<std::string>>& topics,
                                    const std::vector<std::vector<std::string>>& docs,
                                    std::size_t window = 110, double eps = 1e-12) {
    if (topics.empty()) throw ValidationError("coherence_cv: empty topic list");
    std::set<std::string> tracked;
    for (const auto& t : topics) tracked.insert(t.begin(), t.end());
    detail::WindowCounts wc = detail::count_windows(docs, tracked, window);
    if (wc.total == 0) throw ValidationError("coherence_cv: empty corpus");

    CoherenceResult result;
    std::set<std::string> absent;
    for (std::size_t ti = 0; ti < topics.size(); ++ti) {
        // distinct words, first occurrence order
        std::vector<std::string> words;
        for (const auto& w : topics[ti])
            if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
        for (const auto& w : words)
            if (wc.p(w) == 0.0) absent.insert(w);
        if (words.size() < 2) {
            result.per_topic.push_back(0.0);
            result.degenerate_topics.push_back(ti);
            continue;
        }
        std::size_t n = words.size();
        std::vector<std::vector<double>> vec(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                vec[i][j] = detail::npmi(wc, words[i], words[j], eps);
        std::vector<double> vstar(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) vstar[j] += vec[i][j];
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += detail::cosine(vec[i], vstar);
        result.per_topic.push_back(acc / static_cast<double>(n));
    }
    result.absent_words.assign(absent.begin(), absent.end());
    double sum = 0.0;
    for (double s : result.per_topic) sum += s;
    result.score = sum / static_cast<double>(result.per_topic.size());
    return result;
}

// UMass coherence over document co-occurrence counts; cross-check measure.
inline CoherenceResult coherence_umass(const std::vector<std::vector<std::string>>& topics,
                                       const std::vector<std::vector<std::string>>& docs) {
    if (topics.empty()) throw ValidationError("coherence_umass: empty topic list");
    std::set<std::string> tracked;
    for (const auto& t : topics) tracked.insert(t.begin(), t.end());
    // document-level boolean counts == window of unbounded size
    std::vector<std::vector<std::string>> one_window_docs = docs;
    detail::WindowCounts wc =
        detail::count_windows(one_window_docs, tracked,
                              std::numeric_limits<std::size_t>::max());

    CoherenceResult result;
    for (std::size_t ti = 0; ti < topics.size(); ++ti) {
        std::vector<std::string> words;
        for (const auto& w : topics[ti])
            if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
        if (words.size() < 2) {
            result.per_topic.push_back(0.0);
            result.degenerate_topics.push_back(ti);
            continue;
        }
        double acc = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 1; i < words.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                double dj = wc.p(words[j]) * static_cast<double>(wc.total);
                if (dj == 0.0) {
                    result.absent_words.push_back(words[j]);
                    continue;
                }
                double dij = wc.p(words[i], words[j]) * static_cast<double>(wc.total);
                acc += std::log((dij + 1.0) / dj);
                ++pairs;
            }
        }
        result.per_topic.push_back(pairs ? acc / static_cast<double>(pairs) : 0.0);
    }
    double sum = 0.0;
    for (double s : result.per_topic) sum += s;
    result.score = sum / static_cast<double>(result.per_topic.size());
    return result;
}

}  // namespace crisislens

#endif  // CRISISLENS_COHERENCE_HPP
