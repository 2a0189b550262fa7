#include "ptsad/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ptsad/errors.hpp"
#include "ptsad/rng.hpp"

namespace ptsad {

Metrics compute_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw ContractError("compute_metrics on empty counts");
    const auto d = [](std::size_t num, std::size_t den) {
        return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
    };
    Metrics m;
    m.acc = d(c.tp + c.tn, c.total());
    m.sen = d(c.tp, c.tp + c.fn);
    m.spe = d(c.tn, c.fp + c.tn);
    m.pre = d(c.tp, c.total());
    // harmonic mean of precision and recall, reduced to one division
    m.fmea = d(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    return m;
}

ClassifierKind parse_classifier(const std::string& name) {
    if (name == "gnb") return ClassifierKind::Gnb;
    if (name == "lda") return ClassifierKind::Lda;
    if (name == "tree") return ClassifierKind::Tree;
    if (name == "forest") return ClassifierKind::Forest;
    throw ValueError("unknown classifier '" + name + "'");
}

const char* classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Gnb: return "gnb";
        case ClassifierKind::Lda: return "lda";
        case ClassifierKind::Tree: return "tree";
        case ClassifierKind::Forest: return "forest";
    }
    return "?";
}

namespace {

void check_dataset(const Dataset& ds) {
    if (ds.empty()) throw ContractError("empty training set");
    const std::size_t dim = ds[0].features.size();
    for (const Sample& s : ds)
        if (s.features.size() != dim) throw ContractError("inconsistent feature dimensions");
}

std::size_t class_count(const Dataset& ds, Label lb) {
    return static_cast<std::size_t>(
        std::count_if(ds.begin(), ds.end(), [&](const Sample& s) { return s.label == lb; }));
}

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> sd;

    static Standardizer fit(const Dataset& ds, bool enabled) {
        const std::size_t dim = ds[0].features.size();
        Standardizer st;
        st.mean.assign(dim, 0.0);
        st.sd.assign(dim, 1.0);
        if (!enabled) return st;
        for (const Sample& s : ds)
            for (std::size_t d = 0; d < dim; ++d) st.mean[d] += s.features[d];
        for (double& m : st.mean) m /= static_cast<double>(ds.size());
        std::vector<double> var(dim, 0.0);
        for (const Sample& s : ds)
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = s.features[d] - st.mean[d];
                var[d] += diff * diff;
            }
        for (std::size_t d = 0; d < dim; ++d) {
            var[d] /= static_cast<double>(ds.size());
            st.sd[d] = var[d] > 0.0 ? std::sqrt(var[d]) : 1.0;
        }
        return st;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        std::vector<double> z(x.size());
        for (std::size_t d = 0; d < x.size(); ++d) z[d] = (x[d] - mean[d]) / sd[d];
        return z;
    }
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

class GnbModel final : public Classifier {
public:
    GnbModel(const Dataset& train, const ClassifierParams& params) {
        if (class_count(train, Label::N) < 2 || class_count(train, Label::Ab) < 2)
            throw ContractError("gnb needs at least 2 samples per class");
        st_ = Standardizer::fit(train, params.standardize);
        const std::size_t dim = train[0].features.size();

        double global_var = 0.0;
        std::vector<std::vector<double>> z;
        z.reserve(train.size());
        for (const Sample& s : train) z.push_back(st_.apply(s.features));
        for (std::size_t d = 0; d < dim; ++d) {
            double m = 0.0, v = 0.0;
            for (const auto& row : z) m += row[d];
            m /= static_cast<double>(z.size());
            for (const auto& row : z) v += (row[d] - m) * (row[d] - m);
            global_var += v / static_cast<double>(z.size());
        }
        global_var /= static_cast<double>(dim);
        const double floor = 1e-9 * (global_var + 1e-12);

        for (int c = 0; c < 2; ++c) {
            const Label lb = c == 0 ? Label::N : Label::Ab;
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < train.size(); ++i)
                if (train[i].label == lb) idx.push_back(i);
            log_prior_[c] = std::log(static_cast<double>(idx.size()) /
                                     static_cast<double>(train.size()));
            mean_[c].assign(dim, 0.0);
            var_[c].assign(dim, 0.0);
            for (std::size_t i : idx)
                for (std::size_t d = 0; d < dim; ++d) mean_[c][d] += z[i][d];
            for (double& m : mean_[c]) m /= static_cast<double>(idx.size());
            for (std::size_t i : idx)
                for (std::size_t d = 0; d < dim; ++d) {
                    const double diff = z[i][d] - mean_[c][d];
                    var_[c][d] += diff * diff;
                }
            for (double& v : var_[c]) v = std::max(v / static_cast<double>(idx.size()), floor);
        }
    }

    Label predict(const std::vector<double>& features) const override {
        const std::vector<double> z = st_.apply(features);
        double score[2];
        for (int c = 0; c < 2; ++c) {
            double s = log_prior_[c];
            for (std::size_t d = 0; d < z.size(); ++d) {
                const double diff = z[d] - mean_[c][d];
                s += -0.5 * std::log(2.0 * 3.14159265358979323846 * var_[c][d]) -
                     diff * diff / (2.0 * var_[c][d]);
            }
            score[c] = s;
        }
        return score[1] > score[0] ? Label::Ab : Label::N;
    }

private:
    Standardizer st_;
    double log_prior_[2] = {0.0, 0.0};
    std::vector<double> mean_[2];
    std::vector<double> var_[2];
};

// ---------------------------------------------------------------------------
// Two-class LDA with pooled ridge-regularized covariance

class LdaModel final : public Classifier {
public:
    LdaModel(const Dataset& train, const ClassifierParams& params) {
        if (class_count(train, Label::N) < 2 || class_count(train, Label::Ab) < 2)
            throw ContractError("lda needs at least 2 samples per class");
        st_ = Standardizer::fit(train, params.standardize);
        const std::size_t dim = train[0].features.size();

        std::vector<double> mu[2];
        std::size_t cnt[2] = {0, 0};
        mu[0].assign(dim, 0.0);
        mu[1].assign(dim, 0.0);
        std::vector<std::vector<double>> z;
        z.reserve(train.size());
        for (const Sample& s : train) {
            z.push_back(st_.apply(s.features));
            const int c = s.label == Label::Ab ? 1 : 0;
            for (std::size_t d = 0; d < dim; ++d) mu[c][d] += z.back()[d];
            cnt[c] += 1;
        }
        for (int c = 0; c < 2; ++c)
            for (double& m : mu[c]) m /= static_cast<double>(cnt[c]);

        std::vector<std::vector<double>> cov(dim, std::vector<double>(dim, 0.0));
        for (std::size_t i = 0; i < train.size(); ++i) {
            const int c = train[i].label == Label::Ab ? 1 : 0;
            for (std::size_t a = 0; a < dim; ++a)
                for (std::size_t b = 0; b < dim; ++b)
                    cov[a][b] += (z[i][a] - mu[c][a]) * (z[i][b] - mu[c][b]);
        }
        const double denom = static_cast<double>(train.size() - 2);
        double trace = 0.0;
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < dim; ++b) cov[a][b] /= denom;
            trace += cov[a][a];
        }
        const double ridge = 1e-6 * (trace / static_cast<double>(dim) + 1e-12);
        for (std::size_t a = 0; a < dim; ++a) cov[a][a] += ridge;

        std::vector<double> delta(dim);
        for (std::size_t d = 0; d < dim; ++d) delta[d] = mu[1][d] - mu[0][d];
        weights_ = solve(cov, delta);

        double mid = 0.0;
        for (std::size_t d = 0; d < dim; ++d) mid += weights_[d] * 0.5 * (mu[0][d] + mu[1][d]);
        bias_ = -mid + std::log(static_cast<double>(cnt[1]) / static_cast<double>(cnt[0]));
    }

    Label predict(const std::vector<double>& features) const override {
        const std::vector<double> x = st_.apply(features);
        double s = bias_;
        for (std::size_t d = 0; d < x.size(); ++d) s += weights_[d] * x[d];
        return s > 0.0 ? Label::Ab : Label::N;
    }

private:
    // Gaussian elimination with partial pivoting; the matrix is tiny.
    static std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
        const std::size_t n = b.size();
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-14)
                throw ContractError("lda covariance is singular even after ridge");
            std::swap(a[piv], a[col]);
            std::swap(b[piv], b[col]);
            for (std::size_t r = col + 1; r < n; ++r) {
                const double f = a[r][col] / a[col][col];
                for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
                b[r] -= f * b[col];
            }
        }
        std::vector<double> x(n, 0.0);
        for (std::size_t r = n; r-- > 0;) {
            double s = b[r];
            for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
            x[r] = s / a[r][r];
        }
        return x;
    }

    Standardizer st_;
    std::vector<double> weights_;
    double bias_ = 0.0;
};

// ---------------------------------------------------------------------------
// CART decision tree (Gini) and bootstrap forest

struct TreeNode {
    int feature = -1;       // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    Label leaf = Label::N;
};

class TreeModel final : public Classifier {
public:
    TreeModel(const Dataset& train, const std::vector<std::size_t>& indices,
              const ClassifierParams& params, int mtry, Rng* rng) {
        check_dataset(train);
        dim_ = static_cast<int>(train[0].features.size());
        build(train, indices, 0, params, mtry, rng);
    }

    Label predict(const std::vector<double>& features) const override {
        int node = 0;
        while (nodes_[static_cast<std::size_t>(node)].feature >= 0) {
            const TreeNode& nd = nodes_[static_cast<std::size_t>(node)];
            node = features[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left
                                                                                  : nd.right;
        }
        return nodes_[static_cast<std::size_t>(node)].leaf;
    }

private:
    static Label majority(const Dataset& ds, const std::vector<std::size_t>& idx) {
        std::size_t ab = 0;
        for (std::size_t i : idx)
            if (ds[i].label == Label::Ab) ++ab;
        return 2 * ab > idx.size() ? Label::Ab : Label::N;  // ties to N
    }

    static double gini(std::size_t ab, std::size_t total) {
        if (total == 0) return 0.0;
        const double p = static_cast<double>(ab) / static_cast<double>(total);
        return 2.0 * p * (1.0 - p);
    }

    int build(const Dataset& ds, const std::vector<std::size_t>& idx, int depth,
              const ClassifierParams& params, int mtry, Rng* rng) {
        const int me = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        nodes_.back().leaf = majority(ds, idx);

        std::size_t ab = 0;
        for (std::size_t i : idx)
            if (ds[i].label == Label::Ab) ++ab;
        const bool pure = ab == 0 || ab == idx.size();
        if (pure || depth >= params.max_depth ||
            idx.size() < 2 * static_cast<std::size_t>(params.min_leaf))
            return me;

        std::vector<int> features(static_cast<std::size_t>(dim_));
        std::iota(features.begin(), features.end(), 0);
        if (rng && mtry < dim_) {
            // Fisher-Yates prefix draw of mtry features, then sorted for determinism
            for (int i = 0; i < mtry; ++i) {
                const auto j = static_cast<std::size_t>(i) +
                               rng->below(static_cast<std::uint64_t>(dim_ - i));
                std::swap(features[static_cast<std::size_t>(i)], features[j]);
            }
            features.resize(static_cast<std::size_t>(mtry));
            std::sort(features.begin(), features.end());
        }

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, Label>> vals;
        for (int f : features) {
            vals.clear();
            for (std::size_t i : idx)
                vals.emplace_back(ds[i].features[static_cast<std::size_t>(f)], ds[i].label);
            std::sort(vals.begin(), vals.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            std::size_t left_ab = 0;
            std::size_t left_n = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                if (vals[i].second == Label::Ab) ++left_ab;
                else ++left_n;
                if (vals[i].first == vals[i + 1].first) continue;
                const std::size_t left_total = left_ab + left_n;
                const std::size_t right_total = vals.size() - left_total;
                if (left_total < static_cast<std::size_t>(params.min_leaf) ||
                    right_total < static_cast<std::size_t>(params.min_leaf))
                    continue;
                const double score =
                    (static_cast<double>(left_total) * gini(left_ab, left_total) +
                     static_cast<double>(right_total) * gini(ab - left_ab, right_total)) /
                    static_cast<double>(vals.size());
                if (score < best_score) {
                    best_score = score;
                    best_feature = f;
                    best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
                }
            }
        }
        if (best_feature < 0) return me;

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (ds[i].features[static_cast<std::size_t>(best_feature)] <= best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        if (left_idx.empty() || right_idx.empty()) return me;

        const int l = build(ds, left_idx, depth + 1, params, mtry, rng);
        const int r = build(ds, right_idx, depth + 1, params, mtry, rng);
        nodes_[static_cast<std::size_t>(me)].feature = best_feature;
        nodes_[static_cast<std::size_t>(me)].threshold = best_threshold;
        nodes_[static_cast<std::size_t>(me)].left = l;
        nodes_[static_cast<std::size_t>(me)].right = r;
        return me;
    }

    int dim_ = 0;
    std::vector<TreeNode> nodes_;
};

class ForestModel final : public Classifier {
public:
    ForestModel(const Dataset& train, const ClassifierParams& params) {
        check_dataset(train);
        const int dim = static_cast<int>(train[0].features.size());
        const int mtry = params.mtry > 0
                             ? params.mtry
                             : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim))));
        std::vector<std::size_t> all(train.size());
        std::iota(all.begin(), all.end(), 0);
        for (int t = 0; t < params.n_trees; ++t) {
            Rng rng(Rng::derive(params.seed, static_cast<std::uint64_t>(t)));
            std::vector<std::size_t> idx;
            if (params.bootstrap) {
                idx.reserve(train.size());
                for (std::size_t i = 0; i < train.size(); ++i)
                    idx.push_back(rng.below(train.size()));
            } else {
                idx = all;
            }
            trees_.push_back(std::make_unique<TreeModel>(train, idx, params, mtry, &rng));
        }
    }

    Label predict(const std::vector<double>& features) const override {
        std::size_t ab = 0;
        for (const auto& tree : trees_)
            if (tree->predict(features) == Label::Ab) ++ab;
        return 2 * ab > trees_.size() ? Label::Ab : Label::N;
    }

private:
    std::vector<std::unique_ptr<TreeModel>> trees_;
};

}  // namespace

std::unique_ptr<Classifier> train_classifier(ClassifierKind kind, const Dataset& train,
                                             const ClassifierParams& params) {
    check_dataset(train);
    switch (kind) {
        case ClassifierKind::Gnb: return std::make_unique<GnbModel>(train, params);
        case ClassifierKind::Lda: return std::make_unique<LdaModel>(train, params);
        case ClassifierKind::Tree: {
            std::vector<std::size_t> all(train.size());
            std::iota(all.begin(), all.end(), 0);
            return std::make_unique<TreeModel>(train, all, params,
                                               static_cast<int>(train[0].features.size()),
                                               nullptr);
        }
        case ClassifierKind::Forest: return std::make_unique<ForestModel>(train, params);
    }
    throw ContractError("unreachable classifier kind");
}

ConfusionCounts evaluate(const Classifier& model, const Dataset& test) {
    ConfusionCounts c;
    for (const Sample& s : test) {
        const Label pred = model.predict(s.features);
        if (s.label == Label::Ab) {
            if (pred == Label::Ab) ++c.tp;
            else ++c.fn;
        } else {
            if (pred == Label::Ab) ++c.fp;
            else ++c.tn;
        }
    }
    return c;
}

CvResult kfold_cv(const Dataset& ds, int k, ClassifierKind kind, const ClassifierParams& params) {
    check_dataset(ds);
    if (k < 2) throw ContractError("k-fold needs k >= 2");
    if (static_cast<std::size_t>(k) > ds.size()) throw ContractError("k exceeds sample count");

    // stratified assignment: shuffle within each class, deal round-robin
    std::vector<int> fold_of(ds.size(), 0);
    for (int c = 0; c < 2; ++c) {
        const Label lb = c == 0 ? Label::N : Label::Ab;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds[i].label == lb) idx.push_back(i);
        Rng rng(Rng::derive(params.seed, 0xf01d, static_cast<std::uint64_t>(c)));
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold_of[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }

    CvResult result;
    for (int f = 0; f < k; ++f) {
        Dataset train, test;
        for (std::size_t i = 0; i < ds.size(); ++i)
            (fold_of[i] == f ? test : train).push_back(ds[i]);
        if (test.empty()) continue;
        ClassifierParams fold_params = params;
        fold_params.seed = Rng::derive(params.seed, 0xcf1d, static_cast<std::uint64_t>(f));
        std::unique_ptr<Classifier> model;
        try {
            model = train_classifier(kind, train, fold_params);
        } catch (const ContractError&) {
            result.skipped_folds.push_back(f);
            continue;
        }
        const ConfusionCounts c = evaluate(*model, test);
        result.folds.push_back(compute_metrics(c));
        result.pooled_counts.tp += c.tp;
        result.pooled_counts.tn += c.tn;
        result.pooled_counts.fp += c.fp;
        result.pooled_counts.fn += c.fn;
    }
    if (result.pooled_counts.total() == 0)
        throw ContractError("all folds were skipped");
    result.pooled = compute_metrics(result.pooled_counts);
    return result;
}

}  // namespace ptsad
