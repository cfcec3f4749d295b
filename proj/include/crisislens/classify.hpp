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

#ifndef CRISISLENS_CLASSIFY_HPP
#define CRISISLENS_CLASSIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "crisislens/core.hpp"
#include "crisislens/eval.hpp"
#include "crisislens/features.hpp"
#include "crisislens/rng.hpp"

namespace crisislens {

struct LinearHyperparams {
    double learning_rate = 0.1;
    double l2 = 1e-4;
    std::size_t epochs = 300;
    std::uint64_t seed = kDefaultSeed;
};

enum class LinearLoss { SoftmaxCrossEntropy, HingeOvr };

struct LinearModel {
    std::vector<Sentiment> classes;
    std::vector<std::vector<double>> weights;  // classes x features
    std::vector<double> bias;                  // per class
    LinearLoss loss = LinearLoss::SoftmaxCrossEntropy;
    LinearHyperparams hyperparams;
    std::vector<double> loss_trace;  // objective per epoch, entry 0 = at init
};

struct ForestHyperparams {
    std::size_t n_trees = 200;
    std::size_t max_depth = 0;  // 0 = unlimited
    std::uint64_t seed = kDefaultSeed;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::size_t> class_counts;  // filled at leaves
};

struct ForestModel {
    std::vector<Sentiment> classes;
    std::vector<std::vector<TreeNode>> trees;
    ForestHyperparams hyperparams;
    std::size_t n_features = 0;
};

struct KnnModel {
    std::vector<Sentiment> classes;
    SparseMatrix rows;
    std::vector<Sentiment> labels;
    std::size_t k = 15;
};

namespace detail {

inline void check_training_input(const SparseMatrix& X, const std::vector<Sentiment>& y) {
    if (X.rows.size() != y.size())
        throw ValidationError("training: row/label count mismatch");
    if (X.rows.empty()) throw ValidationError("training: empty input");
    std::set<Sentiment> distinct(y.begin(), y.end());
    if (distinct.size() < 2)
        throw ValidationError("training: need at least 2 distinct classes");
}

inline std::vector<Sentiment> class_order(const std::vector<Sentiment>& y) {
    std::vector<Sentiment> classes;
    for (Sentiment s : kSentiments)
        if (std::find(y.begin(), y.end(), s) != y.end()) classes.push_back(s);
    return classes;
}

inline double dot_sparse(const SparseVec& x, const std::vector<double>& w) {
    double acc = 0.0;
    for (const auto& [idx, v] : x) acc += v * w[idx];
    return acc;
}

inline double sparse_value(const SparseVec& row, std::uint32_t feature) {
    auto it = std::lower_bound(row.begin(), row.end(), feature,
                               [](const auto& p, std::uint32_t f) { return p.first < f; });
    return (it != row.end() && it->first == feature) ? it->second : 0.0;
}

}  // namespace detail

// Mean L2-regularized softmax cross-entropy; bias unregularized.
inline double logreg_objective(const SparseMatrix& X, const std::vector<std::size_t>& y,
                               const std::vector<std::vector<double>>& W,
                               const std::vector<double>& b, double l2) {
    std::size_t C = W.size();
    double loss = 0.0;
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        double mx = -1e300;
        std::vector<double> logits(C);
        for (std::size_t c = 0; c < C; ++c) {
            logits[c] = detail::dot_sparse(X.rows[i], W[c]) + b[c];
            mx = std::max(mx, logits[c]);
        }
        double lse = 0.0;
        for (double z : logits) lse += std::exp(z - mx);
        loss += mx + std::log(lse) - logits[y[i]];
    }
    loss /= static_cast<double>(X.rows.size());
    double reg = 0.0;
    for (const auto& row : W)
        for (double w : row) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

// Analytic gradient of logreg_objective; grad_W/grad_b must be pre-sized.
inline void logreg_gradient(const SparseMatrix& X, const std::vector<std::size_t>& y,
                            const std::vector<std::vector<double>>& W,
                            const std::vector<double>& b, double l2,
                            std::vector<std::vector<double>>& grad_W,
                            std::vector<double>& grad_b) {
    std::size_t C = W.size();
    double invN = 1.0 / static_cast<double>(X.rows.size());
    for (std::size_t c = 0; c < C; ++c) {
        std::fill(grad_W[c].begin(), grad_W[c].end(), 0.0);
        grad_b[c] = 0.0;
    }
    std::vector<double> logits(C), p(C);
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        double mx = -1e300;
        for (std::size_t c = 0; c < C; ++c) {
            logits[c] = detail::dot_sparse(X.rows[i], W[c]) + b[c];
            mx = std::max(mx, logits[c]);
        }
        double lse = 0.0;
        for (std::size_t c = 0; c < C; ++c) {
            p[c] = std::exp(logits[c] - mx);
            lse += p[c];
        }
        for (std::size_t c = 0; c < C; ++c) {
            double coef = (p[c] / lse - (y[i] == c ? 1.0 : 0.0)) * invN;
            for (const auto& [idx, v] : X.rows[i]) grad_W[c][idx] += coef * v;
            grad_b[c] += coef;
        }
    }
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t f = 0; f < grad_W[c].size(); ++f) grad_W[c][f] += l2 * W[c][f];
}

// Full-batch gradient descent with a fixed step. On TF-IDF rows (L2 norm <=
// 1) the default step sits well inside the descent region, so the recorded
// objective trace must be non-increasing; a violation beyond 1e-9 throws.
inline LinearModel train_logreg(const SparseMatrix& X, const std::vector<Sentiment>& y,
                                const LinearHyperparams& hp = {}) {
    detail::check_training_input(X, y);
    LinearModel model;
    model.classes = detail::class_order(y);
    model.loss = LinearLoss::SoftmaxCrossEntropy;
    model.hyperparams = hp;
    std::size_t C = model.classes.size();
    std::size_t F = X.cols;
    model.weights.assign(C, std::vector<double>(F, 0.0));
    model.bias.assign(C, 0.0);

    std::vector<std::size_t> yi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        yi[i] = static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), y[i]) -
            model.classes.begin());

    std::vector<std::vector<double>> grad_W(C, std::vector<double>(F, 0.0));
    std::vector<double> grad_b(C, 0.0);
    double prev = logreg_objective(X, yi, model.weights, model.bias, hp.l2);
    model.loss_trace.push_back(prev);
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        logreg_gradient(X, yi, model.weights, model.bias, hp.l2, grad_W, grad_b);
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t f = 0; f < F; ++f)
                model.weights[c][f] -= hp.learning_rate * grad_W[c][f];
            model.bias[c] -= hp.learning_rate * grad_b[c];
        }
        double cur = logreg_objective(X, yi, model.weights, model.bias, hp.l2);
        if (cur > prev + 1e-9)
            throw std::runtime_error("logreg objective increased at epoch " +
                                     std::to_string(epoch));
        model.loss_trace.push_back(cur);
        prev = cur;
    }
    return model;
}

// Sum of per-class one-vs-rest mean hinge losses plus L2.
inline double svm_objective(const SparseMatrix& X, const std::vector<std::size_t>& y,
                            const std::vector<std::vector<double>>& W,
                            const std::vector<double>& b, double l2) {
    double loss = 0.0;
    std::size_t C = W.size();
    double invN = 1.0 / static_cast<double>(X.rows.size());
    for (std::size_t c = 0; c < C; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < X.rows.size(); ++i) {
            double s = (y[i] == c) ? 1.0 : -1.0;
            double margin = s * (detail::dot_sparse(X.rows[i], W[c]) + b[c]);
            acc += std::max(0.0, 1.0 - margin);
        }
        loss += acc * invN;
        for (double w : W[c]) loss += 0.5 * l2 * w * w;
    }
    return loss;
}

// One-vs-rest hinge via deterministic full-batch subgradient descent with
// the epoch-indexed schedule lr/sqrt(t+1). The returned weights are the
// Polyak average of the iterates; its objective trace must be monotone
// within 1e-6 per epoch.
inline LinearModel train_svm(const SparseMatrix& X, const std::vector<Sentiment>& y,
                             const LinearHyperparams& hp = {}) {
    detail::check_training_input(X, y);
    LinearModel model;
    model.classes = detail::class_order(y);
    model.loss = LinearLoss::HingeOvr;
    model.hyperparams = hp;
    std::size_t C = model.classes.size();
    std::size_t F = X.cols;

    std::vector<std::size_t> yi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        yi[i] = static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), y[i]) -
            model.classes.begin());

    std::vector<std::vector<double>> W(C, std::vector<double>(F, 0.0));
    std::vector<double> b(C, 0.0);
    std::vector<std::vector<double>> avg_W(C, std::vector<double>(F, 0.0));
    std::vector<double> avg_b(C, 0.0);
    double invN = 1.0 / static_cast<double>(X.rows.size());

    double prev = svm_objective(X, yi, avg_W, avg_b, hp.l2);
    model.loss_trace.push_back(prev);
    std::vector<double> grad(F);
    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        double step = hp.learning_rate / std::sqrt(static_cast<double>(epoch + 1));
        for (std::size_t c = 0; c < C; ++c) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_b = 0.0;
            for (std::size_t i = 0; i < X.rows.size(); ++i) {
                double s = (yi[i] == c) ? 1.0 : -1.0;
                double margin = s * (detail::dot_sparse(X.rows[i], W[c]) + b[c]);
                if (margin < 1.0) {
                    for (const auto& [idx, v] : X.rows[i]) grad[idx] -= s * v * invN;
                    grad_b -= s * invN;
                }
            }
            for (std::size_t f = 0; f < F; ++f)
                W[c][f] -= step * (grad[f] + hp.l2 * W[c][f]);
            b[c] -= step * grad_b;
        }
        double t = static_cast<double>(epoch + 1);
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t f = 0; f < F; ++f)
                avg_W[c][f] += (W[c][f] - avg_W[c][f]) / t;
            avg_b[c] += (b[c] - avg_b[c]) / t;
        }
        double cur = svm_objective(X, yi, avg_W, avg_b, hp.l2);
        if (cur > prev + 1e-6)
            throw std::runtime_error("svm averaged objective increased at epoch " +
                                     std::to_string(epoch));
        model.loss_trace.push_back(cur);
        prev = cur;
    }
    model.weights = std::move(avg_W);
    model.bias = std::move(avg_b);
    return model;
}

namespace detail {

struct TreeBuilder {
    const SparseMatrix& X;
    const std::vector<std::size_t>& y;
    std::size_t n_classes;
    std::size_t max_depth;
    std::size_t n_subsample;  // features tried per split
    Rng& rng;
    std::vector<TreeNode> nodes;

    static double gini(const std::vector<std::size_t>& counts, std::size_t total) {
        if (total == 0) return 0.0;
        double g = 1.0;
        for (std::size_t c : counts) {
            double p = static_cast<double>(c) / static_cast<double>(total);
            g -= p * p;
        }
        return g;
    }

    std::int32_t build(std::vector<std::size_t>& idx, std::size_t depth) {
        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t i : idx) counts[y[i]] += 1;
        std::size_t nonzero = 0;
        for (std::size_t c : counts)
            if (c > 0) ++nonzero;

        auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.class_counts = counts;
            nodes.push_back(std::move(leaf));
            return static_cast<std::int32_t>(nodes.size() - 1);
        };
        if (nonzero <= 1 || idx.size() < 2 || (max_depth > 0 && depth >= max_depth))
            return make_leaf();

        // distinct random features for this split
        std::set<std::uint32_t> tried;
        std::size_t want = std::min<std::size_t>(n_subsample, X.cols);
        while (tried.size() < want)
            tried.insert(static_cast<std::uint32_t>(rng.uniform_index(X.cols)));

        double parent_gini = gini(counts, idx.size());
        double best_gain = 0.0;
        std::uint32_t best_feature = 0;
        double best_threshold = 0.0;

        std::vector<std::pair<double, std::size_t>> vals;
        for (std::uint32_t f : tried) {
            vals.clear();
            for (std::size_t i : idx) vals.emplace_back(sparse_value(X.rows[i], f), y[i]);
            std::sort(vals.begin(), vals.end());
            if (vals.front().first == vals.back().first) continue;
            std::vector<std::size_t> left_counts(n_classes, 0);
            std::size_t n_left = 0;
            std::size_t total = vals.size();
            for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
                left_counts[vals[k].second] += 1;
                ++n_left;
                if (vals[k].first == vals[k + 1].first) continue;
                std::vector<std::size_t> right_counts(n_classes, 0);
                for (std::size_t c = 0; c < n_classes; ++c)
                    right_counts[c] = counts[c] - left_counts[c];
                double wl = static_cast<double>(n_left) / static_cast<double>(total);
                double g = parent_gini - wl * gini(left_counts, n_left) -
                           (1.0 - wl) * gini(right_counts, total - n_left);
                if (g > best_gain + 1e-15) {
                    best_gain = g;
                    best_feature = f;
                    best_threshold = 0.5 * (vals[k].first + vals[k + 1].first);
                }
            }
        }
        if (best_gain <= 0.0) return make_leaf();

        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) {
            if (sparse_value(X.rows[i], best_feature) <= best_threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        if (left.empty() || right.empty()) return make_leaf();

        std::int32_t self = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        nodes[self].feature = static_cast<std::int32_t>(best_feature);
        nodes[self].threshold = best_threshold;
        std::int32_t l = build(left, depth + 1);
        std::int32_t r = build(right, depth + 1);
        nodes[self].left = l;
        nodes[self].right = r;
        return self;
    }
};

}  // namespace detail

// CART with Gini impurity, bootstrap row sampling, and sqrt(F) feature
// subsampling per split; inference is majority vote over trees.
inline ForestModel train_forest(const SparseMatrix& X, const std::vector<Sentiment>& y,
                                const ForestHyperparams& hp = {}) {
    detail::check_training_input(X, y);
    ForestModel model;
    model.classes = detail::class_order(y);
    model.hyperparams = hp;
    model.n_features = X.cols;
    std::size_t C = model.classes.size();

    std::vector<std::size_t> yi(y.size());
    for (std::size_t i = 0; i < y.size(); ++i)
        yi[i] = static_cast<std::size_t>(
            std::find(model.classes.begin(), model.classes.end(), y[i]) -
            model.classes.begin());

    std::size_t n_subsample = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(X.cols, 1)))));

    for (std::size_t t = 0; t < hp.n_trees; ++t) {
        Rng rng(Rng::derive(hp.seed, t));
        std::vector<std::size_t> sample(X.rows.size());
        for (std::size_t i = 0; i < sample.size(); ++i)
            sample[i] = rng.uniform_index(X.rows.size());
        detail::TreeBuilder builder{X, yi, C, hp.max_depth, n_subsample, rng, {}};
        builder.build(sample, 0);
        model.trees.push_back(std::move(builder.nodes));
    }
    return model;
}

inline KnnModel train_knn(const SparseMatrix& X, const std::vector<Sentiment>& y,
                          std::size_t k = 15) {
    detail::check_training_input(X, y);
    if (k == 0) throw ValidationError("knn: k must be >= 1");
    KnnModel model;
    model.classes = detail::class_order(y);
    model.rows = X;
    model.labels = y;
    model.k = k;
    return model;
}

// ---- prediction -----------------------------------------------------------

inline std::vector<std::vector<double>> predict_scores(const LinearModel& m,
                                                       const SparseMatrix& X) {
    std::vector<std::vector<double>> scores(X.rows.size(),
                                            std::vector<double>(m.classes.size()));
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        for (std::size_t c = 0; c < m.classes.size(); ++c)
            scores[i][c] = detail::dot_sparse(X.rows[i], m.weights[c]) + m.bias[c];
        if (m.loss == LinearLoss::SoftmaxCrossEntropy) {
            double mx = *std::max_element(scores[i].begin(), scores[i].end());
            double lse = 0.0;
            for (double& z : scores[i]) {
                z = std::exp(z - mx);
                lse += z;
            }
            for (double& z : scores[i]) z /= lse;
        }
    }
    return scores;
}

inline std::vector<std::vector<double>> predict_scores(const ForestModel& m,
                                                       const SparseMatrix& X) {
    std::vector<std::vector<double>> scores(X.rows.size(),
                                            std::vector<double>(m.classes.size(), 0.0));
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        for (const auto& tree : m.trees) {
            std::int32_t node = 0;
            while (tree[node].feature >= 0) {
                double v = detail::sparse_value(
                    X.rows[i], static_cast<std::uint32_t>(tree[node].feature));
                node = v <= tree[node].threshold ? tree[node].left : tree[node].right;
            }
            const auto& counts = tree[node].class_counts;
            std::size_t best = 0;
            for (std::size_t c = 1; c < counts.size(); ++c)
                if (counts[c] > counts[best]) best = c;
            scores[i][best] += 1.0;
        }
        for (double& s : scores[i]) s /= static_cast<double>(m.trees.size());
    }
    return scores;
}

inline std::vector<std::vector<double>> predict_scores(const KnnModel& m,
                                                       const SparseMatrix& X) {
    std::vector<std::vector<double>> scores(X.rows.size(),
                                            std::vector<double>(m.classes.size(), 0.0));
    std::size_t k = std::min(m.k, m.rows.rows.size());
    for (std::size_t i = 0; i < X.rows.size(); ++i) {
        // cosine distance on L2-normalized rows; ties go to the lower index
        std::vector<std::pair<double, std::size_t>> dist(m.rows.rows.size());
        for (std::size_t j = 0; j < m.rows.rows.size(); ++j) {
            double dot = 0.0;
            const auto& a = X.rows[i];
            const auto& b = m.rows.rows[j];
            std::size_t pa = 0, pb = 0;
            while (pa < a.size() && pb < b.size()) {
                if (a[pa].first == b[pb].first) {
                    dot += a[pa].second * b[pb].second;
                    ++pa;
                    ++pb;
                } else if (a[pa].first < b[pb].first) {
                    ++pa;
                } else {
                    ++pb;
                }
            }
            dist[j] = {1.0 - dot, j};
        }
        std::sort(dist.begin(), dist.end());
        for (std::size_t n = 0; n < k; ++n) {
            Sentiment lab = m.labels[dist[n].second];
            std::size_t c = static_cast<std::size_t>(
                std::find(m.classes.begin(), m.classes.end(), lab) - m.classes.begin());
            scores[i][c] += 1.0;
        }
        for (double& s : scores[i]) s /= static_cast<double>(k);
    }
    return scores;
}

// argmax with ties broken by class order
inline std::vector<Sentiment> scores_to_labels(const std::vector<Sentiment>& classes,
                                               const std::vector<std::vector<double>>& scores) {
    std::vector<Sentiment> out;
    out.reserve(scores.size());
    for (const auto& row : scores) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < row.size(); ++c)
            if (row[c] > row[best]) best = c;
        out.push_back(classes[best]);
    }
    return out;
}

template <typename Model>
std::vector<Sentiment> predict(const Model& m, const SparseMatrix& X) {
    return scores_to_labels(m.classes, predict_scores(m, X));
}

// ---- JSON persistence ------------------------------------------------------

namespace detail {
inline nlohmann::ordered_json classes_json(const std::vector<Sentiment>& classes) {
    auto arr = nlohmann::ordered_json::array();
    for (Sentiment s : classes) arr.push_back(std::string(to_string(s)));
    return arr;
}

inline std::vector<Sentiment> classes_from_json(const nlohmann::json& arr) {
    std::vector<Sentiment> out;
    for (const auto& v : arr) {
        auto s = parse_sentiment(v.get<std::string>());
        if (!s) throw ValidationError("model JSON: unknown class");
        out.push_back(*s);
    }
    return out;
}
}  // namespace detail

inline nlohmann::ordered_json linear_model_to_json(const LinearModel& m) {
    nlohmann::ordered_json j;
    j["type"] = m.loss == LinearLoss::SoftmaxCrossEntropy ? "logreg" : "svm";
    j["classes"] = detail::classes_json(m.classes);
    j["weights"] = m.weights;
    j["bias"] = m.bias;
    j["loss"] = m.loss == LinearLoss::SoftmaxCrossEntropy ? "softmax_ce" : "hinge_ovr";
    j["hyperparams"] = {{"learning_rate", m.hyperparams.learning_rate},
                        {"l2", m.hyperparams.l2},
                        {"epochs", m.hyperparams.epochs},
                        {"seed", m.hyperparams.seed}};
    j["loss_trace"] = m.loss_trace;
    return j;
}

inline LinearModel linear_model_from_json(const nlohmann::json& j) {
    LinearModel m;
    m.classes = detail::classes_from_json(j.at("classes"));
    m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    m.bias = j.at("bias").get<std::vector<double>>();
    m.loss = j.at("loss") == "softmax_ce" ? LinearLoss::SoftmaxCrossEntropy
                                          : LinearLoss::HingeOvr;
    const auto& hp = j.at("hyperparams");
    m.hyperparams.learning_rate = hp.at("learning_rate").get<double>();
    m.hyperparams.l2 = hp.at("l2").get<double>();
    m.hyperparams.epochs = hp.at("epochs").get<std::size_t>();
    m.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    if (j.contains("loss_trace")) m.loss_trace = j.at("loss_trace").get<std::vector<double>>();
    return m;
}

inline nlohmann::ordered_json forest_model_to_json(const ForestModel& m) {
    nlohmann::ordered_json j;
    j["type"] = "forest";
    j["classes"] = detail::classes_json(m.classes);
    j["n_features"] = m.n_features;
    j["hyperparams"] = {{"n_trees", m.hyperparams.n_trees},
                        {"max_depth", m.hyperparams.max_depth},
                        {"seed", m.hyperparams.seed}};
    auto trees = nlohmann::ordered_json::array();
    for (const auto& tree : m.trees) {
        auto nodes = nlohmann::ordered_json::array();
        for (const TreeNode& n : tree) {
            nlohmann::ordered_json nj;
            nj["f"] = n.feature;
            nj["t"] = n.threshold;
            nj["l"] = n.left;
            nj["r"] = n.right;
            if (!n.class_counts.empty()) nj["c"] = n.class_counts;
            nodes.push_back(nj);
        }
        trees.push_back(nodes);
    }
    j["trees"] = trees;
    return j;
}

inline ForestModel forest_model_from_json(const nlohmann::json& j) {
    ForestModel m;
    m.classes = detail::classes_from_json(j.at("classes"));
    m.n_features = j.at("n_features").get<std::size_t>();
    const auto& hp = j.at("hyperparams");
    m.hyperparams.n_trees = hp.at("n_trees").get<std::size_t>();
    m.hyperparams.max_depth = hp.at("max_depth").get<std::size_t>();
    m.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    for (const auto& tj : j.at("trees")) {
        std::vector<TreeNode> tree;
        for (const auto& nj : tj) {
            TreeNode n;
            n.feature = nj.at("f").get<std::int32_t>();
            n.threshold = nj.at("t").get<double>();
            n.left = nj.at("l").get<std::int32_t>();
            n.right = nj.at("r").get<std::int32_t>();
            if (nj.contains("c")) n.class_counts = nj.at("c").get<std::vector<std::size_t>>();
            tree.push_back(std::move(n));
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

inline nlohmann::ordered_json knn_model_to_json(const KnnModel& m) {
    nlohmann::ordered_json j;
    j["type"] = "knn";
    j["classes"] = detail::classes_json(m.classes);
    j["k"] = m.k;
    j["metric"] = "cosine";
    j["cols"] = m.rows.cols;
    auto rows = nlohmann::ordered_json::array();
    for (const SparseVec& r : m.rows.rows) {
        auto row = nlohmann::ordered_json::array();
        for (const auto& [idx, v] : r) row.push_back({idx, v});
        rows.push_back(row);
    }
    j["rows"] = rows;
    auto labels = nlohmann::ordered_json::array();
    for (Sentiment s : m.labels) labels.push_back(std::string(to_string(s)));
    j["labels"] = labels;
    return j;
}

inline KnnModel knn_model_from_json(const nlohmann::json& j) {
    KnnModel m;
    m.classes = detail::classes_from_json(j.at("classes"));
    m.k = j.at("k").get<std::size_t>();
    m.rows.cols = j.at("cols").get<std::size_t>();
    for (const auto& rj : j.at("rows")) {
        SparseVec row;
        for (const auto& pj : rj)
            row.emplace_back(pj[0].get<std::uint32_t>(), pj[1].get<double>());
        m.rows.rows.push_back(std::move(row));
    }
    m.labels = detail::classes_from_json(j.at("labels"));
    return m;
}

}  // namespace crisislens

#endif  // CRISISLENS_CLASSIFY_HPP
