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

#ifndef CRISISLENS_ANNOTATION_HPP
#define CRISISLENS_ANNOTATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crisislens/core.hpp"
#include "crisislens/corpus.hpp"

namespace crisislens {

struct AnnotationSet {
    std::string record_id;
    std::vector<std::pair<std::string, Sentiment>> votes;  // (annotator_id, label)
    std::vector<double> weights;  // parallel to votes; all > 0
};

struct VoteResult {
    bool is_tie = false;
    Sentiment label = Sentiment::Outrage;     // valid when !is_tie
    std::vector<Sentiment> tied;              // valid when is_tie, class order
};

// Weighted majority vote: argmax_c sum_j w_j * [vote_j == c]. A shared
// maximum yields a Tie listing the tied classes.
inline VoteResult majority_vote(const AnnotationSet& a) {
    if (a.votes.empty()) throw ValidationError("majority_vote: empty vote list");
    if (!a.weights.empty() && a.weights.size() != a.votes.size())
        throw ValidationError("majority_vote: weights/votes length mismatch");
    std::array<double, 3> sums{0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < a.votes.size(); ++j) {
        double w = a.weights.empty() ? 1.0 : a.weights[j];
        if (w <= 0) throw ValidationError("majority_vote: nonpositive weight");
        sums[static_cast<std::size_t>(a.votes[j].second)] += w;
    }
    double best = *std::max_element(sums.begin(), sums.end());
    VoteResult r;
    for (Sentiment s : kSentiments)
        if (sums[static_cast<std::size_t>(s)] == best) r.tied.push_back(s);
    if (r.tied.size() == 1) {
        r.label = r.tied[0];
        r.tied.clear();
    } else {
        r.is_tie = true;
    }
    return r;
}

enum class TiePolicy { Reject, Priority };

struct TieRecord {
    std::string record_id;
    std::vector<Sentiment> tied_classes;
};

struct ResolveResult {
    Corpus labeled;
    std::vector<TieRecord> ties;
};

// Resolves every record to a final label. Pre-labeled records pass through;
// annotated records go through weighted majority vote. Ties either go to the
// tie report (Reject) or take the first tied class in `priority` order.
inline ResolveResult resolve_corpus(const Corpus& corpus, TiePolicy policy,
                                    const std::vector<Sentiment>& priority = {},
                                    const std::vector<double>& weights = {}) {
    ResolveResult out;
    for (const Headline& h : corpus) {
        if (h.label) {
            out.labeled.push_back(h);
            continue;
        }
        if (h.annotations.empty())
            throw ValidationError("record '" + h.id + "' has neither label nor annotations");
        AnnotationSet a;
        a.record_id = h.id;
        for (const Annotation& ann : h.annotations) a.votes.emplace_back(ann.annotator_id, ann.label);
        if (!weights.empty()) {
            if (weights.size() < a.votes.size())
                throw ValidationError("resolve_corpus: fewer weights than votes");
            a.weights.assign(weights.begin(), weights.begin() + a.votes.size());
        }
        VoteResult v = majority_vote(a);
        if (!v.is_tie) {
            Headline labeled = h;
            labeled.label = v.label;
            out.labeled.push_back(std::move(labeled));
            continue;
        }
        if (policy == TiePolicy::Reject) {
            out.ties.push_back({h.id, v.tied});
            continue;
        }
        if (priority.empty()) throw ValidationError("priority tie policy needs a class order");
        Headline labeled = h;
        for (Sentiment s : priority) {
            if (std::find(v.tied.begin(), v.tied.end(), s) != v.tied.end()) {
                labeled.label = s;
                break;
            }
        }
        if (!labeled.label)
            throw ValidationError("priority order covers no tied class for '" + h.id + "'");
        out.labeled.push_back(std::move(labeled));
    }
    return out;
}

inline void write_tie_report(const std::vector<TieRecord>& ties, std::ostream& out) {
    for (const TieRecord& t : ties) {
        nlohmann::ordered_json j;
        j["record_id"] = t.record_id;
        auto arr = nlohmann::ordered_json::array();
        for (Sentiment s : t.tied_classes) arr.push_back(std::string(to_string(s)));
        j["tied_classes"] = arr;
        out << j.dump() << '\n';
    }
}

struct PairAgreement {
    double kappa = 0.0;
    double observed = 0.0;
    double expected = 0.0;
    std::size_t n = 0;
};

// Cohen's kappa, nominal form: (p_o - p_e) / (1 - p_e). The degenerate case
// p_e = 1 (both marginals concentrated on one class) returns 1 when p_o = 1.
inline double cohen_kappa(const std::vector<Sentiment>& a, const std::vector<Sentiment>& b,
                          double* observed = nullptr, double* expected = nullptr) {
    if (a.size() != b.size()) throw ValidationError("cohen_kappa: length mismatch");
    if (a.empty()) throw ValidationError("cohen_kappa: empty input");
    double n = static_cast<double>(a.size());
    std::array<double, 3> ma{0, 0, 0}, mb{0, 0, 0};
    double agree = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma[static_cast<std::size_t>(a[i])] += 1;
        mb[static_cast<std::size_t>(b[i])] += 1;
        if (a[i] == b[i]) agree += 1;
    }
    double po = agree / n;
    double pe = 0;
    for (std::size_t c = 0; c < 3; ++c) pe += (ma[c] / n) * (mb[c] / n);
    if (observed) *observed = po;
    if (expected) *expected = pe;
    if (pe >= 1.0) return po >= 1.0 ? 1.0 : 0.0;
    return (po - pe) / (1.0 - pe);
}

struct AgreementReport {
    std::map<std::string, PairAgreement> pairwise;  // "annotator_1|annotator_2" -> stats
    double mean_kappa = 0.0;
};

// Pairwise kappas over every annotator pair, computed on records where both
// annotators voted. Cohen's kappa is pairwise; the mean of the pairwise
// values is the headline figure.
inline AgreementReport compute_agreement(const Corpus& corpus) {
    std::vector<std::string> annotators;
    for (const Headline& h : corpus)
        for (const Annotation& a : h.annotations)
            if (std::find(annotators.begin(), annotators.end(), a.annotator_id) ==
                annotators.end())
                annotators.push_back(a.annotator_id);
    std::sort(annotators.begin(), annotators.end());
    if (annotators.size() < 2)
        throw ValidationError("agreement needs at least two annotators with votes");

    AgreementReport report;
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < annotators.size(); ++i) {
        for (std::size_t j = i + 1; j < annotators.size(); ++j) {
            std::vector<Sentiment> va, vb;
            for (const Headline& h : corpus) {
                const Annotation* pa = nullptr;
                const Annotation* pb = nullptr;
                for (const Annotation& a : h.annotations) {
                    if (a.annotator_id == annotators[i]) pa = &a;
                    if (a.annotator_id == annotators[j]) pb = &a;
                }
                if (pa && pb) {
                    va.push_back(pa->label);
                    vb.push_back(pb->label);
                }
            }
            if (va.empty()) continue;
            PairAgreement pa;
            pa.n = va.size();
            pa.kappa = cohen_kappa(va, vb, &pa.observed, &pa.expected);
            report.pairwise[annotators[i] + "|" + annotators[j]] = pa;
            sum += pa.kappa;
            ++pairs;
        }
    }
    if (pairs == 0) throw ValidationError("no annotator pair shares any record");
    report.mean_kappa = sum / static_cast<double>(pairs);
    return report;
}

inline double round4(double v) { return std::round(v * 10000.0) / 10000.0; }

inline nlohmann::ordered_json agreement_to_json(const AgreementReport& r) {
    nlohmann::ordered_json j;
    auto pairs = nlohmann::ordered_json::object();
    for (const auto& [key, pa] : r.pairwise) {
        nlohmann::ordered_json p;
        p["kappa"] = round4(pa.kappa);
        p["observed_agreement"] = round4(pa.observed);
        p["expected_agreement"] = round4(pa.expected);
        p["n"] = pa.n;
        pairs[key] = p;
    }
    j["pairwise"] = pairs;
    j["mean_kappa"] = round4(r.mean_kappa);
    return j;
}

}  // namespace crisislens

#endif  // CRISISLENS_ANNOTATION_HPP
