#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/matrix.hpp"

namespace cxrsev {

// RBF kernel exp(-gamma * ||a - b||^2). Value in (0, 1] for gamma >= 0.
double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

struct SvmParams {
    double C = 1.0;
    double gamma = 0.0; // <= 0 selects the scale heuristic 1/(dim * var(X))
    double tol = 1e-3;
    int max_passes = 100; // cap on optimization sweeps
    std::uint64_t seed = 0;
};

// gamma actually used for training: params.gamma when positive, otherwise
// 1/(dim * population variance of all entries of X).
double resolve_gamma(const SvmParams& params, const FeatureMatrix& X);

struct SvmBinaryModel {
    FeatureMatrix support_vectors;
    std::vector<double> dual_coef; // alpha_i * y_i per support vector
    double bias = 0.0;
    double gamma = 0.0;
    double C = 0.0;
    bool converged = true; // all points met the KKT conditions within tol
};

// Optimization diagnostics, mainly for verification against the dual QP.
struct SvmTrainInfo {
    std::vector<double> alphas; // one per training row
    double bias = 0.0;
    int sweeps = 0;
    double max_kkt_violation = 0.0;
    bool converged = false;
};

// Trains the binary soft-margin RBF SVM by sequential minimal optimization:
// sweeps select KKT violators as the first coefficient, the partner is chosen
// by the largest error difference with a seeded fallback scan, and pairs are
// updated analytically. Labels must be -1/+1 with both classes present.
SvmBinaryModel svm_train_binary(const FeatureMatrix& X, const std::vector<int>& y,
                                const SvmParams& params, SvmTrainInfo* info = nullptr);

double svm_decision(const SvmBinaryModel& m, std::span<const double> x);

struct PairwiseSvm {
    int class_a = 0; // positive side of the decision function
    int class_b = 0;
    SvmBinaryModel model;
};

struct MultiClassSvm {
    std::vector<int> classes; // distinct labels, ascending
    std::size_t dim = 0;
    std::vector<PairwiseSvm> pairs; // one per unordered class pair
};

// One-vs-one training over all unordered label pairs; each pair trains on its
// own substream of params.seed.
MultiClassSvm svm_train(const FeatureMatrix& X, const std::vector<int>& labels,
                        const SvmParams& params);

// Majority vote over pairwise decisions. Vote ties break toward the largest
// summed |decision value| over the pairs involving the class, then toward the
// lowest class index.
int svm_predict(const MultiClassSvm& m, std::span<const double> x);

// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K(x_i, x_j),
// shared by training diagnostics and the QP verification tests.
double svm_dual_objective(const FeatureMatrix& X, const std::vector<int>& y,
                          const std::vector<double>& alphas, double gamma);

} // namespace cxrsev
