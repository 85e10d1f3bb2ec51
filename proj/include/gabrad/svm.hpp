#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <list>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gabrad/errors.hpp"
#include "gabrad/parallel.hpp"
#include "gabrad/rng.hpp"

namespace gabrad {

enum class KernelKind : std::uint8_t { linear = 0, rbf = 1, polynomial = 2 };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double gamma = 1.0;  // rbf
    int degree = 3;      // polynomial
    double coef0 = 1.0;  // polynomial

    bool operator==(const KernelSpec&) const = default;
};

inline const char* kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::linear: return "linear";
        case KernelKind::rbf: return "rbf";
        case KernelKind::polynomial: return "polynomial";
    }
    return "?";
}

inline double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                          std::span<const double> y) {
    if (x.size() != y.size())
        fail(Errc::dimension_mismatch, "kernel_eval: operand dimensions differ");
    switch (spec.kind) {
        case KernelKind::linear: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return dot;
        }
        case KernelKind::rbf: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                double d = x[i] - y[i];
                d2 += d * d;
            }
            return std::exp(-spec.gamma * d2);
        }
        case KernelKind::polynomial: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return std::pow(dot + spec.coef0, spec.degree);
        }
    }
    fail(Errc::dimension_mismatch, "kernel_eval: unknown kernel kind");
}

/// Dense row-major sample matrix.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t dim = 0;
    std::vector<double> data;

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * dim, dim};
    }
    void push_row(std::span<const double> r) {
        data.insert(data.end(), r.begin(), r.end());
        ++rows;
    }
};

struct BinaryModel {
    FeatureMatrix support_vectors;
    std::vector<double> alphas; // alpha_i * y_i, one per support vector
    double bias = 0.0;
    int pair_a = -1; // class index voted for when the decision is >= 0
    int pair_b = -1;
};

/// Pre-sign decision value b + sum_i alphas[i] * K(sv_i, x).
inline double decision_value(const BinaryModel& model, const KernelSpec& spec,
                             std::span<const double> x) {
    if (model.support_vectors.rows > 0 && model.support_vectors.dim != x.size())
        fail(Errc::dimension_mismatch, "decision_value: dimension differs from support vectors");
    double acc = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.rows; ++i)
        acc += model.alphas[i] * kernel_eval(spec, model.support_vectors.row(i), x);
    return acc;
}

struct SmoStats {
    std::vector<double> alphas; // full per-sample signed alpha_i * y_i
    double bias = 0.0;
    long iterations = 0;
    bool converged = false;
};

namespace detail {

/// LRU cache of kernel matrix rows; bounded so large one-against-one
/// subproblems stay inside a fixed memory budget.
class KernelRowCache {
public:
    KernelRowCache(const FeatureMatrix& x, const KernelSpec& spec,
                   std::size_t byte_budget = std::size_t{256} << 20)
        : x_(x), spec_(spec) {
        std::size_t row_bytes = std::max<std::size_t>(x.rows * sizeof(double), 1);
        cap_ = std::max<std::size_t>(2, std::min(x.rows, byte_budget / row_bytes));
        diag_.resize(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i)
            diag_[i] = kernel_eval(spec_, x_.row(i), x_.row(i));
    }

    double diag(std::size_t i) const { return diag_[i]; }

    const std::vector<double>& row(std::size_t i) {
        auto it = index_.find(i);
        if (it != index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
        if (index_.size() >= cap_) {
            index_.erase(lru_.back());
            lru_.pop_back();
        }
        std::vector<double> r(x_.rows);
        auto xi = x_.row(i);
        for (std::size_t t = 0; t < x_.rows; ++t) r[t] = kernel_eval(spec_, xi, x_.row(t));
        lru_.push_front(i);
        auto [pos, inserted] = index_.emplace(i, std::make_pair(std::move(r), lru_.begin()));
        return pos->second.first;
    }

private:
    const FeatureMatrix& x_;
    KernelSpec spec_;
    std::size_t cap_;
    std::vector<double> diag_;
    std::list<std::size_t> lru_;
    std::unordered_map<std::size_t, std::pair<std::vector<double>, std::list<std::size_t>::iterator>> index_;
};

/// SMO with second-order working-set selection: the first index maximizes
/// the KKT violation over I_up, the second maximizes the guaranteed
/// objective decrease among I_low candidates. Terminates when the maximal
/// violating pair gap drops to tol, i.e. every sample meets its KKT
/// condition within tol.
inline SmoStats smo_solve(const FeatureMatrix& x, const std::vector<int>& y,
                          const KernelSpec& spec, double c, double tol, int max_passes) {
    constexpr double kTau = 1e-12;
    const std::size_t n = x.rows;

    KernelRowCache cache(x, spec);
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0); // gradient of the dual objective at alpha = 0

    const long max_iter = static_cast<long>(max_passes) * static_cast<long>(std::max<std::size_t>(n, 64));
    SmoStats stats;

    for (stats.iterations = 0; stats.iterations < max_iter; ++stats.iterations) {
        // working set
        double gmax = -1e300, gmax2 = -1e300;
        std::ptrdiff_t i = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] == +1 ? alpha[t] < c : alpha[t] > 0.0) {
                double v = y[t] == +1 ? -grad[t] : grad[t];
                if (v >= gmax) { gmax = v; i = static_cast<std::ptrdiff_t>(t); }
            }
        }
        if (i < 0) break;
        const std::vector<double>& k_i = cache.row(static_cast<std::size_t>(i));

        std::ptrdiff_t j = -1;
        double best_obj = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            bool in_low = y[t] == +1 ? alpha[t] > 0.0 : alpha[t] < c;
            if (!in_low) continue;
            double ygt = y[t] == +1 ? grad[t] : -grad[t];
            if (ygt >= gmax2) gmax2 = ygt;
            double grad_diff = gmax + ygt;
            if (grad_diff <= 0.0) continue;
            double quad = cache.diag(static_cast<std::size_t>(i)) + cache.diag(t) - 2.0 * k_i[t];
            if (quad <= 0.0) quad = kTau;
            double obj = -(grad_diff * grad_diff) / quad;
            if (obj <= best_obj) { best_obj = obj; j = static_cast<std::ptrdiff_t>(t); }
        }

        if (gmax + gmax2 <= tol || j < 0) {
            stats.converged = true;
            break;
        }

        const std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
        const std::vector<double>& k_j = cache.row(jj);
        double old_ai = alpha[ii], old_aj = alpha[jj];

        if (y[ii] != y[jj]) {
            double quad = cache.diag(ii) + cache.diag(jj) - 2.0 * k_i[jj];
            if (quad <= 0.0) quad = kTau;
            double delta = (-grad[ii] - grad[jj]) / quad;
            double diff = alpha[ii] - alpha[jj];
            alpha[ii] += delta;
            alpha[jj] += delta;
            if (diff > 0.0) {
                if (alpha[jj] < 0.0) { alpha[jj] = 0.0; alpha[ii] = diff; }
            } else {
                if (alpha[ii] < 0.0) { alpha[ii] = 0.0; alpha[jj] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[ii] > c) { alpha[ii] = c; alpha[jj] = c - diff; }
            } else {
                if (alpha[jj] > c) { alpha[jj] = c; alpha[ii] = c + diff; }
            }
        } else {
            double quad = cache.diag(ii) + cache.diag(jj) - 2.0 * k_i[jj];
            if (quad <= 0.0) quad = kTau;
            double delta = (grad[ii] - grad[jj]) / quad;
            double sum = alpha[ii] + alpha[jj];
            alpha[ii] -= delta;
            alpha[jj] += delta;
            if (sum > c) {
                if (alpha[ii] > c) { alpha[ii] = c; alpha[jj] = sum - c; }
            } else {
                if (alpha[jj] < 0.0) { alpha[jj] = 0.0; alpha[ii] = sum; }
            }
            if (sum > c) {
                if (alpha[jj] > c) { alpha[jj] = c; alpha[ii] = sum - c; }
            } else {
                if (alpha[ii] < 0.0) { alpha[ii] = 0.0; alpha[jj] = sum; }
            }
        }

        double dai = alpha[ii] - old_ai, daj = alpha[jj] - old_aj;
        if (dai == 0.0 && daj == 0.0) break; // numerically stalled
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[ii] * k_i[t] * dai + y[jj] * k_j[t] * daj);
    }

    // bias from the KKT conditions: average y*grad over free vectors, else
    // the midpoint of the bound-implied interval
    double upper = 1e300, lower = -1e300, free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        double yg = y[t] * grad[t];
        if (alpha[t] >= c) {
            if (y[t] == -1) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] == +1) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;

    stats.alphas.resize(n);
    for (std::size_t t = 0; t < n; ++t) stats.alphas[t] = alpha[t] * y[t];
    stats.bias = -rho;
    return stats;
}

} // namespace detail

/// Train one soft-margin binary SVM on labels in {-1, +1}. Only samples
/// with |alpha| above 1e-12 are retained as support vectors.
inline BinaryModel train_binary(const FeatureMatrix& x, const std::vector<int>& y,
                                const KernelSpec& spec, double c, double tol = 1e-3,
                                int max_passes = 100, SmoStats* stats_out = nullptr) {
    if (x.rows != y.size())
        fail(Errc::dimension_mismatch, "train_binary: labels do not match sample count");
    bool has_pos = false, has_neg = false;
    for (int label : y) {
        if (label == +1) has_pos = true;
        else if (label == -1) has_neg = true;
        else fail(Errc::dimension_mismatch, "train_binary: labels must be -1 or +1");
    }
    if (!has_pos || !has_neg)
        fail(Errc::single_class_data, "train_binary: need at least one sample of each label");
    for (double v : x.data)
        if (!std::isfinite(v)) fail(Errc::non_finite_feature, "train_binary: non-finite feature value");

    SmoStats stats = detail::smo_solve(x, y, spec, c, tol, max_passes);

    BinaryModel model;
    model.bias = stats.bias;
    model.support_vectors.dim = x.dim;
    for (std::size_t t = 0; t < x.rows; ++t) {
        if (std::abs(stats.alphas[t]) > 1e-12) {
            model.support_vectors.push_row(x.row(t));
            model.alphas.push_back(stats.alphas[t]);
        }
    }
    if (stats_out) *stats_out = std::move(stats);
    return model;
}

struct LabeledSample {
    std::string label;
    std::vector<double> features;
};

struct MulticlassModel {
    KernelSpec kernel;
    std::vector<std::string> classes;                 // lexicographic
    std::vector<std::pair<double, double>> scaling;   // per-dimension (min, max)
    std::vector<BinaryModel> binaries;                // (0,1),(0,2),...,(1,2),...

    std::size_t dim() const { return scaling.size(); }

    std::vector<double> apply_scaling(std::span<const double> x) const {
        if (x.size() != scaling.size())
            fail(Errc::dimension_mismatch, "predict: feature dimension differs from training");
        std::vector<double> out(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto [lo, hi] = scaling[i];
            out[i] = hi > lo ? (x[i] - lo) / (hi - lo) : 0.0;
        }
        return out;
    }
};

/// One-against-one training. Features are rescaled per dimension to [0,1]
/// using min/max over the whole training set (constant dimensions map to
/// 0); the k(k-1)/2 binary machines are trained on the rescaled pairwise
/// subsets with the lexicographically smaller class as the +1 side. The
/// pairwise trainings are independent: they fan out across workers and
/// land in pair order, so the model does not depend on the worker count.
inline MulticlassModel train_multiclass(const std::vector<LabeledSample>& data,
                                        const KernelSpec& spec, double c,
                                        double tol = 1e-3, int max_passes = 100,
                                        bool scale_features = true, int workers = 1) {
    if (data.empty()) fail(Errc::fewer_than_two_classes, "train_multiclass: empty training set");
    const std::size_t dim = data[0].features.size();
    for (const auto& s : data) {
        if (s.features.size() != dim)
            fail(Errc::dimension_mismatch, "train_multiclass: inconsistent feature dimensions");
        for (double v : s.features)
            if (!std::isfinite(v)) fail(Errc::non_finite_feature, "train_multiclass: non-finite feature");
    }

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label].push_back(i);
    if (by_class.size() < 2)
        fail(Errc::fewer_than_two_classes, "train_multiclass: need at least two classes");

    MulticlassModel model;
    model.kernel = spec;
    for (const auto& [label, _] : by_class) model.classes.push_back(label);

    model.scaling.assign(dim, {0.0, 1.0});
    if (scale_features) {
        for (std::size_t d = 0; d < dim; ++d) {
            double lo = data[0].features[d], hi = lo;
            for (const auto& s : data) {
                lo = std::min(lo, s.features[d]);
                hi = std::max(hi, s.features[d]);
            }
            model.scaling[d] = {lo, hi};
        }
    }

    std::vector<std::vector<double>> scaled(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        scaled[i] = model.apply_scaling(data[i].features);

    const int k = static_cast<int>(model.classes.size());
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) pairs.emplace_back(a, b);

    model.binaries.resize(pairs.size());
    parallel_for(pairs.size(), workers, [&](std::size_t p) {
        auto [a, b] = pairs[p];
        FeatureMatrix x;
        x.dim = dim;
        std::vector<int> y;
        for (std::size_t idx : by_class.at(model.classes[static_cast<std::size_t>(a)])) {
            x.push_row(scaled[idx]);
            y.push_back(+1);
        }
        for (std::size_t idx : by_class.at(model.classes[static_cast<std::size_t>(b)])) {
            x.push_row(scaled[idx]);
            y.push_back(-1);
        }
        BinaryModel bin = train_binary(x, y, spec, c, tol, max_passes);
        bin.pair_a = a;
        bin.pair_b = b;
        model.binaries[p] = std::move(bin);
    });
    return model;
}

/// Majority vote over the pairwise machines. Ties fall back to the larger
/// sum of absolute decision values over the tied labels' binaries, then to
/// lexicographic label order.
inline std::string predict(const MulticlassModel& model, std::span<const double> x) {
    std::vector<double> scaled = model.apply_scaling(x);
    std::vector<int> votes(model.classes.size(), 0);
    std::vector<double> weight(model.classes.size(), 0.0);
    for (const BinaryModel& bin : model.binaries) {
        double d = decision_value(bin, model.kernel, scaled);
        int winner = d >= 0.0 ? bin.pair_a : bin.pair_b;
        ++votes[static_cast<std::size_t>(winner)];
        weight[static_cast<std::size_t>(bin.pair_a)] += std::abs(d);
        weight[static_cast<std::size_t>(bin.pair_b)] += std::abs(d);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < model.classes.size(); ++i) {
        if (votes[i] > votes[best]) best = i;
        else if (votes[i] == votes[best] && weight[i] > weight[best]) best = i;
        // equal votes and equal weight: keep the lexicographically smaller label
    }
    return model.classes[best];
}

inline double accuracy(const MulticlassModel& model, const std::vector<LabeledSample>& test) {
    if (test.empty()) fail(Errc::empty_test_set, "accuracy: empty test set");
    std::size_t correct = 0;
    for (const auto& s : test)
        if (predict(model, s.features) == s.label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

struct GridSearchResult {
    double c = 0.0;
    double gamma = 0.0;
    double cv_accuracy = 0.0;
};

/// 5-fold cross-validated grid search over (C, gamma). Folds are stratified
/// per class after a seeded shuffle; ties prefer the smaller C, then the
/// smaller gamma, so results are reproducible.
inline GridSearchResult grid_search(const std::vector<LabeledSample>& data,
                                    KernelKind kind, std::span<const double> cs,
                                    std::span<const double> gammas, int folds,
                                    std::uint64_t seed, double tol = 1e-3,
                                    int max_passes = 100, bool scale_features = true) {
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data[i].label].push_back(i);

    DetRng rng(seed);
    std::vector<int> fold_of(data.size(), 0);
    for (auto& [label, idxs] : by_class) {
        rng.shuffle(idxs);
        for (std::size_t p = 0; p < idxs.size(); ++p)
            fold_of[idxs[p]] = static_cast<int>(p % static_cast<std::size_t>(folds));
    }

    GridSearchResult best;
    bool first = true;
    for (double c : cs) {
        for (double gamma : gammas) {
            KernelSpec spec{kind, gamma, 3, 1.0};
            std::size_t correct = 0, total = 0;
            for (int f = 0; f < folds; ++f) {
                std::vector<LabeledSample> train, eval;
                for (std::size_t i = 0; i < data.size(); ++i)
                    (fold_of[i] == f ? eval : train).push_back(data[i]);
                std::map<std::string, int> classes_in_train;
                for (const auto& s : train) ++classes_in_train[s.label];
                if (classes_in_train.size() < 2 || eval.empty()) continue;
                MulticlassModel m = train_multiclass(train, spec, c, tol, max_passes, scale_features);
                for (const auto& s : eval) {
                    if (predict(m, s.features) == s.label) ++correct;
                    ++total;
                }
            }
            double acc = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
            if (first || acc > best.cv_accuracy) {
                best = {c, gamma, acc};
                first = false;
            }
        }
    }
    return best;
}

} // namespace gabrad
