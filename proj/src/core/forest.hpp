#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/matrix.hpp"

namespace cxrsev {

struct ForestParams {
    int n_trees = 100;
    int max_depth = 0; // <= 0 means unlimited
    int m_try = 0;     // <= 0 means floor(sqrt(dim))
    int min_samples_leaf = 1;
    std::uint64_t seed = 0;
};

// Axis-aligned split node; leaves carry a class label.
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = -1;
};

struct DecisionTree {
    std::vector<TreeNode> nodes; // node 0 is the root

    int predict(std::span<const double> x) const {
        int idx = 0;
        while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
            const auto& n = nodes[static_cast<std::size_t>(idx)];
            idx = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
        }
        return nodes[static_cast<std::size_t>(idx)].label;
    }
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    int n_classes = 0;
    std::size_t dim = 0;
    ForestParams params;
};

// Bagged Gini decision trees: each tree trains on a seeded bootstrap sample
// and evaluates m_try seeded-random candidate features per node. Tree t draws
// from an independent substream keyed by t, so results are reproducible.
ForestModel rf_train(const FeatureMatrix& X, const std::vector<int>& labels,
                     const ForestParams& params);

// Majority vote over trees; ties go to the lowest class index.
int rf_predict(const ForestModel& m, std::span<const double> x);

} // namespace cxrsev
