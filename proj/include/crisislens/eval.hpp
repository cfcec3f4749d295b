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

#ifndef CRISISLENS_EVAL_HPP
#define CRISISLENS_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crisislens/core.hpp"
#include "crisislens/corpus.hpp"
#include "crisislens/rng.hpp"

namespace crisislens {

struct SplitSpec {
    double train = 0.70;
    double validation = 0.0;
    double test = 0.30;
    std::uint64_t seed = kDefaultSeed;

    void validate() const {
        if (train <= 0 || validation < 0 || test < 0)
            throw ValidationError("split fractions must be positive (validation may be 0)");
        if (std::abs(train + validation + test - 1.0) > 1e-9)
            throw ValidationError("split fractions must sum to 1");
    }
};

struct Split {
    std::vector<std::size_t> train;       // indices into the input corpus
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

namespace detail {
// Largest-remainder apportionment of n into parts; remainder ties go to the
// earlier part.
inline std::vector<std::size_t> largest_remainder(std::size_t n,
                                                  const std::vector<double>& fractions) {
    std::vector<std::size_t> base(fractions.size());
    std::vector<double> rem(fractions.size());
    std::size_t assigned = 0;
    for (std::size_t p = 0; p < fractions.size(); ++p) {
        double q = fractions[p] * static_cast<double>(n);
        base[p] = static_cast<std::size_t>(std::floor(q));
        rem[p] = q - std::floor(q);
        assigned += base[p];
    }
    std::vector<std::size_t> order(fractions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; k < n - assigned; ++k) ++base[order[k]];
    return base;
}
}  // namespace detail

// Stratified split: per class, records are shuffled by the seed and
// apportioned by largest remainder, so parts partition the corpus exactly
// and per-class proportions deviate from the spec by less than one record.
inline Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
    spec.validate();
    std::map<Sentiment, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!corpus[i].label)
            throw ValidationError("stratified_split: record '" + corpus[i].id +
                                  "' has no label");
        by_class[*corpus[i].label].push_back(i);
    }
    std::vector<double> fractions = {spec.train, spec.validation, spec.test};
    std::size_t nonzero_parts = 0;
    for (double f : fractions)
        if (f > 0) ++nonzero_parts;

    Split split;
    Rng rng(spec.seed);
    for (auto& [label, idxs] : by_class) {
        if (idxs.size() < nonzero_parts)
            throw ValidationError("class '" + std::string(to_string(label)) +
                                  "' has fewer records than split parts");
        rng.shuffle(idxs);
        auto sizes = detail::largest_remainder(idxs.size(), fractions);
        std::size_t pos = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            auto* dst = p == 0 ? &split.train : (p == 1 ? &split.validation : &split.test);
            for (std::size_t k = 0; k < sizes[p]; ++k) dst->push_back(idxs[pos++]);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_denominator = false;  // precision denominator was 0
};

struct EvalReport {
    std::vector<Sentiment> classes;
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double micro_precision = 0.0;
    double micro_recall = 0.0;
    double micro_f1 = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    nlohmann::ordered_json model_config;              // echoed hyperparameters
};

// Table-style metrics: per-class precision/recall/F1 with macro and micro
// averages; zero denominators yield 0 with a flag. Values are exact; any
// rounding happens at presentation.
inline EvalReport metrics(const std::vector<Sentiment>& truth,
                          const std::vector<Sentiment>& predicted,
                          const std::vector<Sentiment>& classes) {
    if (truth.size() != predicted.size()) throw ValidationError("metrics: length mismatch");
    if (truth.empty()) throw ValidationError("metrics: empty input");

    EvalReport r;
    r.classes = classes;
    std::size_t C = classes.size();
    std::map<Sentiment, std::size_t> cidx;
    for (std::size_t c = 0; c < C; ++c) cidx[classes[c]] = c;
    r.confusion.assign(C, std::vector<std::size_t>(C, 0));

    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        r.confusion[cidx.at(truth[i])][cidx.at(predicted[i])] += 1;
        if (truth[i] == predicted[i]) ++correct;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

    double tp_total = 0, fp_total = 0, fn_total = 0;
    r.per_class.resize(C);
    for (std::size_t c = 0; c < C; ++c) {
        double tp = static_cast<double>(r.confusion[c][c]);
        double fp = 0, fn = 0;
        for (std::size_t k = 0; k < C; ++k) {
            if (k == c) continue;
            fp += static_cast<double>(r.confusion[k][c]);
            fn += static_cast<double>(r.confusion[c][k]);
        }
        ClassMetrics& m = r.per_class[c];
        if (tp + fp > 0) {
            m.precision = tp / (tp + fp);
        } else {
            m.precision = 0.0;
            m.zero_denominator = true;
        }
        m.recall = (tp + fn > 0) ? tp / (tp + fn) : 0.0;
        m.f1 = (m.precision + m.recall > 0)
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        tp_total += tp;
        fp_total += fp;
        fn_total += fn;
    }
    for (const ClassMetrics& m : r.per_class) {
        r.macro_precision += m.precision;
        r.macro_recall += m.recall;
        r.macro_f1 += m.f1;
    }
    r.macro_precision /= static_cast<double>(C);
    r.macro_recall /= static_cast<double>(C);
    r.macro_f1 /= static_cast<double>(C);
    r.micro_precision = (tp_total + fp_total > 0) ? tp_total / (tp_total + fp_total) : 0.0;
    r.micro_recall = (tp_total + fn_total > 0) ? tp_total / (tp_total + fn_total) : 0.0;
    r.micro_f1 = (r.micro_precision + r.micro_recall > 0)
                     ? 2.0 * r.micro_precision * r.micro_recall /
                           (r.micro_precision + r.micro_recall)
                     : 0.0;
    return r;
}

// presentation rounding used by report tables: 2 decimals, half-up
inline double round2_half_up(double v) { return std::floor(v * 100.0 + 0.5) / 100.0; }

inline nlohmann::ordered_json eval_report_to_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["accuracy"] = r.accuracy;
    auto per = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < r.classes.size(); ++c) {
        nlohmann::ordered_json m;
        m["precision"] = r.per_class[c].precision;
        m["recall"] = r.per_class[c].recall;
        m["f1"] = r.per_class[c].f1;
        if (r.per_class[c].zero_denominator) m["zero_denominator"] = true;
        per[std::string(to_string(r.classes[c]))] = m;
    }
    j["per_class"] = per;
    j["macro"] = {{"precision", r.macro_precision},
                  {"recall", r.macro_recall},
                  {"f1", r.macro_f1}};
    j["micro"] = {{"precision", r.micro_precision},
                  {"recall", r.micro_recall},
                  {"f1", r.micro_f1}};
    j["confusion"] = r.confusion;
    auto order = nlohmann::ordered_json::array();
    for (Sentiment s : r.classes) order.push_back(std::string(to_string(s)));
    j["class_order"] = order;
    if (!r.model_config.is_null()) j["model_config"] = r.model_config;
    return j;
}

// stdout table mirroring the Acc./Prec./Rec./F1 column order
inline void print_eval_table(std::ostream& out, const std::string& model_name,
                             const EvalReport& r) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-16s %5s %6s %5s %5s", "Model", "Acc.", "Prec.",
                  "Rec.", "F1");
    out << buf << '\n';
    std::snprintf(buf, sizeof(buf), "%-16s %5.2f %6.2f %5.2f %5.2f", model_name.c_str(),
                  round2_half_up(r.accuracy), round2_half_up(r.macro_precision),
                  round2_half_up(r.macro_recall), round2_half_up(r.macro_f1));
    out << buf << '\n';
}

}  // namespace crisislens

#endif  // CRISISLENS_EVAL_HPP
