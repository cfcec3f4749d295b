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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <set>

#include "crisislens/lda.hpp"

using namespace crisislens;

namespace {

SparseMatrix counts_from_docs(const std::vector<std::vector<std::uint32_t>>& docs,
                              std::size_t V) {
    SparseMatrix m;
    m.cols = V;
    for (const auto& d : docs) {
        std::map<std::uint32_t, double> acc;
        for (std::uint32_t w : d) acc[w] += 1.0;
        m.rows.emplace_back(acc.begin(), acc.end());
    }
    return m;
}

// Exact log evidence by exhaustive enumeration over all K^N topic
// assignments with Dirichlet-multinomial integrals. Test-only oracle,
// independent of the variational path.
double exact_log_evidence(const std::vector<std::vector<std::uint32_t>>& docs, std::size_t V,
                          std::size_t K, double alpha, double beta) {
    std::vector<std::pair<std::size_t, std::uint32_t>> tokens;  // (doc, word)
    for (std::size_t i = 0; i < docs.size(); ++i)
        for (std::uint32_t w : docs[i]) tokens.emplace_back(i, w);
    std::size_t N = tokens.size();
    std::size_t M = docs.size();

    std::vector<double> log_terms;
    std::vector<std::size_t> assign(N, 0);
    while (true) {
        std::vector<std::vector<std::size_t>> n_ik(M, std::vector<std::size_t>(K, 0));
        std::vector<std::vector<std::size_t>> m_kv(K, std::vector<std::size_t>(V, 0));
        for (std::size_t t = 0; t < N; ++t) {
            n_ik[tokens[t].first][assign[t]] += 1;
            m_kv[assign[t]][tokens[t].second] += 1;
        }
        double lp = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            lp += std::lgamma(K * alpha) - std::lgamma(K * alpha + docs[i].size());
            for (std::size_t k = 0; k < K; ++k)
                lp += std::lgamma(alpha + n_ik[i][k]) - std::lgamma(alpha);
        }
        for (std::size_t k = 0; k < K; ++k) {
            std::size_t mk = std::accumulate(m_kv[k].begin(), m_kv[k].end(), std::size_t{0});
            lp += std::lgamma(V * beta) - std::lgamma(V * beta + mk);
            for (std::size_t v = 0; v < V; ++v)
                lp += std::lgamma(beta + m_kv[k][v]) - std::lgamma(beta);
        }
        log_terms.push_back(lp);

        std::size_t pos = 0;
        while (pos < N && ++assign[pos] == K) assign[pos++] = 0;
        if (pos == N) break;
    }
    double mx = *std::max_element(log_terms.begin(), log_terms.end());
    double sum = 0.0;
    for (double t : log_terms) sum += std::exp(t - mx);
    return mx + std::log(sum);
}

const std::vector<std::vector<std::uint32_t>> kTinyDocs = {{0, 1}, {0}};

}  // namespace

TEST_CASE("digamma against known values") {
    // psi(1) = -euler_mascheroni; psi(0.5) = -gamma - 2 ln 2
    CHECK_THAT(digamma(1.0), Catch::Matchers::WithinAbs(-0.5772156649015329, 1e-12));
    CHECK_THAT(digamma(0.5), Catch::Matchers::WithinAbs(-1.9635100260214235, 1e-12));
    CHECK_THAT(digamma(10.0), Catch::Matchers::WithinAbs(2.251752589066721, 1e-12));
    // recurrence psi(x+1) = psi(x) + 1/x
    for (double x : {0.1, 0.7, 2.3, 5.9, 17.0})
        CHECK_THAT(digamma(x + 1.0), Catch::Matchers::WithinAbs(digamma(x) + 1.0 / x, 1e-12));
}

TEST_CASE("enumeration oracle reproduces frozen reference values") {
    // frozen from an independent Python implementation of the same integral
    CHECK_THAT(exact_log_evidence(kTinyDocs, 2, 2, 0.5, 0.5),
               Catch::Matchers::WithinAbs(-2.5494451709255728, 1e-9));
    CHECK_THAT(exact_log_evidence(kTinyDocs, 2, 2, 0.1, 0.01),
               Catch::Matchers::WithinAbs(-4.36903943914707, 1e-9));
}

TEST_CASE("k=1 closed form") {
    auto docs = std::vector<std::vector<std::uint32_t>>{{0, 1, 1}, {2, 0}, {1}};
    SparseMatrix X = counts_from_docs(docs, 3);
    LdaConfig cfg;
    cfg.K = 1;
    cfg.alpha = 0.7;
    cfg.beta = 0.3;
    cfg.max_iters = 5;
    cfg.elbo_tol = 1e-300;  // force all iterations
    TopicModel m = lda_fit(X, cfg);

    // lambda = beta + corpus term counts exactly
    CHECK_THAT(m.lambda[0][0], Catch::Matchers::WithinAbs(0.3 + 2, 1e-12));
    CHECK_THAT(m.lambda[0][1], Catch::Matchers::WithinAbs(0.3 + 3, 1e-12));
    CHECK_THAT(m.lambda[0][2], Catch::Matchers::WithinAbs(0.3 + 1, 1e-12));
    // gamma_i = alpha + N_i exactly
    CHECK_THAT(m.gamma[0][0], Catch::Matchers::WithinAbs(0.7 + 3, 1e-12));
    CHECK_THAT(m.gamma[1][0], Catch::Matchers::WithinAbs(0.7 + 2, 1e-12));
    CHECK_THAT(m.gamma[2][0], Catch::Matchers::WithinAbs(0.7 + 1, 1e-12));
    // ELBO constant after iteration 1
    for (std::size_t i = 1; i < m.elbo_trace.size(); ++i)
        CHECK_THAT(m.elbo_trace[i], Catch::Matchers::WithinAbs(m.elbo_trace[0], 1e-9));
}

TEST_CASE("elbo trace non-decreasing on random corpora") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        std::size_t M = 3 + rng.uniform_index(10);
        std::size_t V = 4 + rng.uniform_index(12);
        std::vector<std::vector<std::uint32_t>> docs(M);
        for (auto& d : docs) {
            std::size_t n = 1 + rng.uniform_index(12);
            for (std::size_t j = 0; j < n; ++j)
                d.push_back(static_cast<std::uint32_t>(rng.uniform_index(V)));
        }
        LdaConfig cfg;
        cfg.K = 1 + rng.uniform_index(4);
        cfg.seed = seed;
        cfg.max_iters = 60;
        cfg.elbo_tol = 1e-300;
        TopicModel m = lda_fit(counts_from_docs(docs, V), cfg);
        for (std::size_t i = 1; i < m.elbo_trace.size(); ++i)
            CHECK(m.elbo_trace[i] >= m.elbo_trace[i - 1] - 1e-6);
    }
}

TEST_CASE("elbo function matches trace and increases before convergence") {
    Rng rng(77);
    std::vector<std::vector<std::uint32_t>> docs(6);
    for (auto& d : docs)
        for (int j = 0; j < 8; ++j) d.push_back(static_cast<std::uint32_t>(rng.uniform_index(5)));
    SparseMatrix X = counts_from_docs(docs, 5);

    LdaConfig cfg;
    cfg.K = 3;
    cfg.max_iters = 4;
    cfg.elbo_tol = 1e-300;
    TopicModel m = lda_fit(X, cfg);
    REQUIRE(m.elbo_trace.size() == 4);
    CHECK_THAT(elbo(m, X), Catch::Matchers::WithinAbs(m.elbo_trace.back(), 1e-9));

    // one more round from the non-converged state strictly increases
    LdaConfig more = cfg;
    more.max_iters = 5;
    TopicModel m2 = lda_fit(X, more);
    CHECK(m2.elbo_trace[4] > m2.elbo_trace[3]);
}

TEST_CASE("variational bound below exact evidence on tiny instance") {
    SparseMatrix X = counts_from_docs(kTinyDocs, 2);
    LdaConfig cfg;
    cfg.K = 2;
    cfg.alpha = 0.5;
    cfg.beta = 0.5;
    cfg.max_iters = 200;
    double exact = exact_log_evidence(kTinyDocs, 2, 2, 0.5, 0.5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        TopicModel m = lda_fit(X, cfg);
        double bound = m.elbo_trace.back();
        CHECK(bound <= exact + 1e-9);
        CHECK(exact - bound < 5.0);
        CHECK(exact - bound >= 0.0);
    }
}

TEST_CASE("normalized rows are probability vectors") {
    Rng rng(31);
    std::vector<std::vector<std::uint32_t>> docs(8);
    for (auto& d : docs)
        for (int j = 0; j < 10; ++j)
            d.push_back(static_cast<std::uint32_t>(rng.uniform_index(7)));
    LdaConfig cfg;
    cfg.K = 3;
    TopicModel m = lda_fit(counts_from_docs(docs, 7), cfg);
    for (const auto& row : m.lambda) {
        double sum = std::accumulate(row.begin(), row.end(), 0.0);
        double norm = 0;
        for (double v : row) {
            CHECK(v > 0);
            norm += v / sum;
        }
        CHECK_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
    for (const auto& row : m.gamma)
        for (double v : row) CHECK(v > 0);
}

TEST_CASE("fit invariant to document reordering") {
    Rng rng(41);
    std::vector<std::vector<std::uint32_t>> docs(6);
    for (auto& d : docs)
        for (int j = 0; j < 6; ++j) d.push_back(static_cast<std::uint32_t>(rng.uniform_index(5)));
    LdaConfig cfg;
    cfg.K = 2;
    cfg.max_iters = 40;
    TopicModel a = lda_fit(counts_from_docs(docs, 5), cfg);

    std::vector<std::size_t> perm{3, 1, 5, 0, 4, 2};
    std::vector<std::vector<std::uint32_t>> permuted;
    for (std::size_t i : perm) permuted.push_back(docs[i]);
    TopicModel b = lda_fit(counts_from_docs(permuted, 5), cfg);

    REQUIRE(a.elbo_trace.size() == b.elbo_trace.size());
    CHECK_THAT(a.elbo_trace.back(),
               Catch::Matchers::WithinAbs(b.elbo_trace.back(), 1e-9));
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t v = 0; v < 5; ++v)
            CHECK_THAT(a.lambda[k][v], Catch::Matchers::WithinAbs(b.lambda[k][v], 1e-9));
    // gamma rows permute with the documents
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t k = 0; k < 2; ++k)
            CHECK_THAT(b.gamma[i][k], Catch::Matchers::WithinAbs(a.gamma[perm[i]][k], 1e-9));
}

TEST_CASE("planted two-topic corpus recovered") {
    // two disjoint 5-word vocabularies; 100 docs per topic
    auto generate = [](std::uint64_t seed) {
        Rng rng(seed);
        std::vector<std::vector<std::uint32_t>> docs;
        for (int topic = 0; topic < 2; ++topic) {
            for (int d = 0; d < 100; ++d) {
                std::vector<std::uint32_t> doc;
                std::size_t n = 5 + rng.uniform_index(6);
                for (std::size_t j = 0; j < n; ++j)
                    doc.push_back(static_cast<std::uint32_t>(topic * 5 + rng.uniform_index(5)));
                docs.push_back(doc);
            }
        }
        return docs;
    };
    int recovered = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto docs = generate(seed);
        LdaConfig cfg;
        cfg.K = 2;
        cfg.seed = seed;
        TopicModel m = lda_fit(counts_from_docs(docs, 10), cfg);
        // top-5 index sets per topic
        std::vector<std::set<std::uint32_t>> tops;
        for (std::size_t k = 0; k < 2; ++k) {
            std::vector<std::size_t> order(10);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return m.lambda[k][a] > m.lambda[k][b];
            });
            tops.emplace_back(order.begin(), order.begin() + 5);
        }
        std::set<std::uint32_t> lo{0, 1, 2, 3, 4}, hi{5, 6, 7, 8, 9};
        bool ok = (tops[0] == lo && tops[1] == hi) || (tops[0] == hi && tops[1] == lo);
        if (ok) ++recovered;
    }
    CHECK(recovered >= 9);
}

TEST_CASE("fit drops empty documents") {
    SparseMatrix X = counts_from_docs({{0, 1}, {}, {1}}, 2);
    LdaConfig cfg;
    cfg.K = 2;
    TopicModel m = lda_fit(X, cfg);
    CHECK(m.kept_docs == std::vector<std::size_t>{0, 2});
    CHECK(m.gamma.size() == 2);
}

TEST_CASE("fit validation errors") {
    SparseMatrix X = counts_from_docs({{0}}, 1);
    LdaConfig cfg;
    cfg.K = 0;
    CHECK_THROWS_AS(lda_fit(X, cfg), ValidationError);
    cfg.K = 2;
    cfg.beta = 0.0;
    CHECK_THROWS_AS(lda_fit(X, cfg), ValidationError);
    cfg.beta = 0.1;
    CHECK_THROWS_AS(lda_fit(counts_from_docs({{}, {}}, 2), cfg), ValidationError);
}

TEST_CASE("top words on k=1 toy corpus") {
    std::vector<TokenizedDoc> docs(2);
    docs[0].tokens = {"x", "x", "y"};
    docs[1].tokens = {"x", "z"};
    Vocabulary vocab = build_vocabulary(docs, {1, 1}, 100);
    SparseMatrix X = count_matrix(docs, vocab);
    LdaConfig cfg;
    cfg.K = 1;
    TopicModel m = lda_fit(X, cfg, vocab.digest());
    TopicSummary s = top_words(m, vocab, 0, 2);
    REQUIRE(s.top_words.size() == 2);
    CHECK(s.top_words[0].first == "x");  // most frequent corpus term
    double wsum = 0;
    for (const auto& [t, w] : s.top_words) wsum += w;
    CHECK(wsum <= 1.0 + 1e-12);
}

TEST_CASE("topic model json round trip") {
    Rng rng(3);
    std::vector<std::vector<std::uint32_t>> docs(4);
    for (auto& d : docs)
        for (int j = 0; j < 5; ++j) d.push_back(static_cast<std::uint32_t>(rng.uniform_index(4)));
    LdaConfig cfg;
    cfg.K = 2;
    TopicModel m = lda_fit(counts_from_docs(docs, 4), cfg, "digest123");
    auto j = topic_model_to_json(m);
    TopicModel back = topic_model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.lambda == m.lambda);
    CHECK(back.gamma == m.gamma);
    CHECK(back.elbo_trace == m.elbo_trace);
    CHECK(back.vocab_digest == "digest123");
    CHECK(back.config.K == 2);
}
