#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/matrix.hpp"

namespace cxrsev {

struct SmoteConfig {
    int k = 5;
    std::uint64_t seed = 0;
};

// Indices of the k rows closest to row i in Euclidean distance, excluding i
// itself. Ties break toward the lower index.
std::vector<std::size_t> knn_indices(const FeatureMatrix& X, std::size_t i, int k);

// S = x + u * (xR - x), componentwise.
std::vector<double> smote_sample(std::span<const double> x, std::span<const double> xr,
                                 double u);

// Generation record for one synthetic sample, for downstream verification.
struct SmoteOrigin {
    std::size_t base;     // minority row the segment starts from
    std::size_t neighbor; // selected minority neighbor
    double u;
};

// n_new synthetic rows: each draws a uniform minority row, one of its k
// nearest minority neighbors, and u in [0,1). Deterministic given cfg.seed.
FeatureMatrix smote_oversample(const FeatureMatrix& minority, std::size_t n_new,
                               const SmoteConfig& cfg,
                               std::vector<SmoteOrigin>* origins = nullptr);

struct BalancedData {
    FeatureMatrix X;
    std::vector<int> labels;
    std::vector<bool> synthetic; // false for every original row
};

// Oversamples every class up to the largest class count. Original rows are
// preserved in order; synthetic rows are appended class by class (ascending
// label), each class using an independent substream of cfg.seed.
BalancedData balance_dataset(const FeatureMatrix& X, const std::vector<int>& labels,
                             const SmoteConfig& cfg);

} // namespace cxrsev
