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

#ifndef CRISISLENS_LDA_HPP
#define CRISISLENS_LDA_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "crisislens/core.hpp"
#include "crisislens/features.hpp"
#include "crisislens/rng.hpp"

namespace crisislens {

struct LdaConfig {
    std::size_t K = 10;
    double alpha = 0.0;  // 0 = default 1/K, resolved at fit
    double beta = 0.01;
    std::size_t max_iters = 200;
    double elbo_tol = 1e-4;  // relative ELBO change
    std::uint64_t seed = kDefaultSeed;

    double resolved_alpha() const {
        return alpha > 0 ? alpha : 1.0 / static_cast<double>(K);
    }

    void validate() const {
        if (K < 1) throw ValidationError("lda: K must be >= 1");
        if (alpha < 0 || beta <= 0) throw ValidationError("lda: alpha/beta must be positive");
        if (elbo_tol <= 0) throw ValidationError("lda: elbo_tol must be positive");
    }
};

// Fitted variational state: q(phi_k) = Dir(lambda_k), q(theta_i) = Dir(gamma_i).
// Per-word categorical parameters are recomputed on the fly, never stored.
struct TopicModel {
    LdaConfig config;
    std::vector<std::vector<double>> lambda;  // K x V
    std::vector<std::vector<double>> gamma;   // kept-docs x K
    std::vector<double> elbo_trace;           // ELBO after each iteration
    std::vector<std::size_t> kept_docs;       // row index into the input matrix
    std::string vocab_digest;
};

// digamma via the standard shift-then-asymptotic-series expansion
inline double digamma(double x) {
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    double r = 1.0 / x;
    result += std::log(x) - 0.5 * r;
    double r2 = r * r;
    result -= r2 * (1.0 / 12.0 -
                    r2 * (1.0 / 120.0 - r2 * (1.0 / 252.0 - r2 * (1.0 / 240.0 - r2 / 132.0))));
    return result;
}

namespace detail {

struct ElogTables {
    std::vector<std::vector<double>> theta;  // docs x K
    std::vector<std::vector<double>> beta;   // K x V
};

inline ElogTables expectation_logs(const TopicModel& m) {
    ElogTables t;
    std::size_t K = m.config.K;
    t.theta.resize(m.gamma.size(), std::vector<double>(K));
    for (std::size_t i = 0; i < m.gamma.size(); ++i) {
        double sum = std::accumulate(m.gamma[i].begin(), m.gamma[i].end(), 0.0);
        double dsum = digamma(sum);
        for (std::size_t k = 0; k < K; ++k) t.theta[i][k] = digamma(m.gamma[i][k]) - dsum;
    }
    t.beta.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double sum = std::accumulate(m.lambda[k].begin(), m.lambda[k].end(), 0.0);
        double dsum = digamma(sum);
        t.beta[k].resize(m.lambda[k].size());
        for (std::size_t v = 0; v < m.lambda[k].size(); ++v)
            t.beta[k][v] = digamma(m.lambda[k][v]) - dsum;
    }
    return t;
}

// E_q[log p(Dir sample)] - E_q[log q] for one Dirichlet factor with
// symmetric prior `conc` and variational parameter `param`.
inline double dirichlet_terms(const std::vector<double>& param, double conc,
                              const std::vector<double>& elog) {
    double sum = std::accumulate(param.begin(), param.end(), 0.0);
    double n = static_cast<double>(param.size());
    double val = std::lgamma(conc * n) - n * std::lgamma(conc);
    for (std::size_t j = 0; j < param.size(); ++j) val += (conc - 1.0) * elog[j];
    val -= std::lgamma(sum);
    for (std::size_t j = 0; j < param.size(); ++j) {
        val += std::lgamma(param[j]);
        val -= (param[j] - 1.0) * elog[j];
    }
    return val;
}

}  // namespace detail

// Full ELBO of the current state, with the per-word categoricals taken at
// their optimum given (gamma, lambda); the token contribution then collapses
// to a log-sum-exp. Includes every Dirichlet prior and entropy term.
inline double elbo(const TopicModel& m, const SparseMatrix& X) {
    std::size_t K = m.config.K;
    double alpha = m.config.resolved_alpha();
    double beta = m.config.beta;
    detail::ElogTables t = detail::expectation_logs(m);

    double value = 0.0;
    std::vector<double> a(K);
    for (std::size_t row = 0; row < m.kept_docs.size(); ++row) {
        const SparseVec& doc = X.rows[m.kept_docs[row]];
        for (const auto& [v, cnt] : doc) {
            double mx = -1e300;
            for (std::size_t k = 0; k < K; ++k) {
                a[k] = t.theta[row][k] + t.beta[k][v];
                mx = std::max(mx, a[k]);
            }
            double lse = 0.0;
            for (std::size_t k = 0; k < K; ++k) lse += std::exp(a[k] - mx);
            value += cnt * (mx + std::log(lse));
        }
        value += detail::dirichlet_terms(m.gamma[row], alpha, t.theta[row]);
    }
    for (std::size_t k = 0; k < K; ++k)
        value += detail::dirichlet_terms(m.lambda[k], beta, t.beta[k]);
    return value;
}

// Coordinate-ascent mean-field variational Bayes. Each iteration updates the
// per-word categoricals from the previous (gamma, lambda), then gamma and
// lambda from those categoricals; every block update is exact, so the
// recorded ELBO trace is non-decreasing. Documents with no in-vocabulary
// tokens are dropped (reported via kept_docs).
inline TopicModel lda_fit(const SparseMatrix& X, const LdaConfig& cfg,
                          const std::string& vocab_digest = "") {
    cfg.validate();
    std::size_t K = cfg.K;
    std::size_t V = X.cols;
    if (V == 0) throw ValidationError("lda: empty vocabulary");

    TopicModel model;
    model.config = cfg;
    model.config.alpha = cfg.resolved_alpha();
    model.vocab_digest = vocab_digest;
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        double total = 0.0;
        for (const auto& [v, cnt] : X.rows[i]) total += cnt;
        if (total > 0) model.kept_docs.push_back(i);
    }
    if (model.kept_docs.empty()) throw ValidationError("lda: all documents are empty");

    double alpha = model.config.alpha;
    double beta = cfg.beta;
    std::size_t M = model.kept_docs.size();

    // uniform jitter above beta breaks topic symmetry at init
    Rng rng(cfg.seed);
    model.lambda.assign(K, std::vector<double>(V));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t v = 0; v < V; ++v) model.lambda[k][v] = beta + rng.uniform_real();

    model.gamma.assign(M, std::vector<double>(K));
    for (std::size_t row = 0; row < M; ++row) {
        double n_i = 0.0;
        for (const auto& [v, cnt] : X.rows[model.kept_docs[row]]) n_i += cnt;
        for (std::size_t k = 0; k < K; ++k)
            model.gamma[row][k] = alpha + n_i / static_cast<double>(K);
    }

    std::vector<double> phi(K), a(K);
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        detail::ElogTables t = detail::expectation_logs(model);
        std::vector<std::vector<double>> lambda_new(K, std::vector<double>(V, beta));
        for (std::size_t row = 0; row < M; ++row) {
            const SparseVec& doc = X.rows[model.kept_docs[row]];
            std::vector<double> gamma_new(K, alpha);
            for (const auto& [v, cnt] : doc) {
                double mx = -1e300;
                for (std::size_t k = 0; k < K; ++k) {
                    a[k] = t.theta[row][k] + t.beta[k][v];
                    mx = std::max(mx, a[k]);
                }
                double norm = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    phi[k] = std::exp(a[k] - mx);
                    norm += phi[k];
                }
                for (std::size_t k = 0; k < K; ++k) {
                    double mass = cnt * phi[k] / norm;
                    gamma_new[k] += mass;
                    lambda_new[k][v] += mass;
                }
            }
            model.gamma[row] = std::move(gamma_new);
        }
        model.lambda = std::move(lambda_new);

        double cur = elbo(model, X);
        model.elbo_trace.push_back(cur);
        if (have_prev) {
            double rel = std::abs(cur - prev) / (std::abs(prev) + 1e-12);
            if (rel < cfg.elbo_tol) break;
        }
        prev = cur;
        have_prev = true;
    }
    return model;
}

struct TopicSummary {
    std::size_t topic = 0;
    std::vector<std::pair<std::string, double>> top_words;  // (term, normalized weight)
};

// n most probable terms under the normalized topic-word row, ties by term order.
inline TopicSummary top_words(const TopicModel& m, const Vocabulary& vocab,
                              std::size_t topic, std::size_t n = 10) {
    if (topic >= m.lambda.size()) throw ValidationError("top_words: topic out of range");
    const auto& row = m.lambda[topic];
    double sum = std::accumulate(row.begin(), row.end(), 0.0);
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return a < b;
    });
    TopicSummary s;
    s.topic = topic;
    for (std::size_t i = 0; i < std::min(n, order.size()); ++i)
        s.top_words.emplace_back(vocab.terms[order[i]], row[order[i]] / sum);
    return s;
}

inline nlohmann::ordered_json topic_model_to_json(const TopicModel& m) {
    nlohmann::ordered_json j;
    j["config"] = {{"K", m.config.K},          {"alpha", m.config.alpha},
                   {"beta", m.config.beta},    {"max_iters", m.config.max_iters},
                   {"elbo_tol", m.config.elbo_tol}, {"seed", m.config.seed}};
    j["lambda"] = m.lambda;
    j["gamma"] = m.gamma;
    j["elbo_trace"] = m.elbo_trace;
    j["kept_docs"] = m.kept_docs;
    j["vocab_digest"] = m.vocab_digest;
    return j;
}

inline TopicModel topic_model_from_json(const nlohmann::json& j) {
    TopicModel m;
    const auto& c = j.at("config");
    m.config.K = c.at("K").get<std::size_t>();
    m.config.alpha = c.at("alpha").get<double>();
    m.config.beta = c.at("beta").get<double>();
    m.config.max_iters = c.at("max_iters").get<std::size_t>();
    m.config.elbo_tol = c.at("elbo_tol").get<double>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.lambda = j.at("lambda").get<std::vector<std::vector<double>>>();
    m.gamma = j.at("gamma").get<std::vector<std::vector<double>>>();
    m.elbo_trace = j.at("elbo_trace").get<std::vector<double>>();
    m.kept_docs = j.at("kept_docs").get<std::vector<std::size_t>>();
    m.vocab_digest = j.at("vocab_digest").get<std::string>();
    return m;
}

}  // namespace crisislens

#endif  // CRISISLENS_LDA_HPP
