#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ptsad/series.hpp"

namespace ptsad {

struct Sample {
    std::vector<double> features;
    Label label = Label::N;
};

using Dataset = std::vector<Sample>;

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
};

/// `pre` is prevalence = TP / total, as the evaluation defines it.
struct Metrics {
    double acc = 0.0;
    double sen = 0.0;
    double spe = 0.0;
    double pre = 0.0;
    double fmea = 0.0;
};

Metrics compute_metrics(const ConfusionCounts& c);

enum class ClassifierKind { Gnb, Lda, Tree, Forest };

ClassifierKind parse_classifier(const std::string& name);
const char* classifier_name(ClassifierKind kind);

struct ClassifierParams {
    int n_trees = 100;
    int max_depth = 12;
    int min_leaf = 1;
    bool bootstrap = true;        ///< forest only
    int mtry = 0;                 ///< features per split; 0 = ceil(sqrt(dim)), forest only
    bool standardize = true;      ///< z-score features for GNB/LDA, fit on training data
    std::uint64_t seed = 1;
};

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual Label predict(const std::vector<double>& features) const = 0;
};

/// Ties break to N everywhere.
std::unique_ptr<Classifier> train_classifier(ClassifierKind kind, const Dataset& train,
                                             const ClassifierParams& params = {});

ConfusionCounts evaluate(const Classifier& model, const Dataset& test);

struct CvResult {
    Metrics pooled;
    ConfusionCounts pooled_counts;
    std::vector<Metrics> folds;
    std::vector<int> skipped_folds;  ///< folds whose training set had a single class
};

/// Stratified k-fold cross validation, deterministic under seed; pooled
/// confusion across folds.
CvResult kfold_cv(const Dataset& ds, int k, ClassifierKind kind,
                  const ClassifierParams& params = {});

}  // namespace ptsad
