#include "core/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/rng.hpp"

namespace cxrsev {

namespace {

struct TreeBuilder {
    const FeatureMatrix& X;
    const std::vector<int>& y;
    int n_classes;
    int m_try;
    int max_depth;
    int min_samples_leaf;
    Rng& rng;
    DecisionTree tree;

    int majority(const std::vector<std::size_t>& samples) const {
        std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
        for (std::size_t s : samples)
            ++counts[static_cast<std::size_t>(y[s])];
        int best = 0;
        for (int c = 1; c < n_classes; ++c)
            if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(best)])
                best = c;
        return best;
    }

    bool pure(const std::vector<std::size_t>& samples) const {
        for (std::size_t s : samples)
            if (y[s] != y[samples.front()])
                return false;
        return true;
    }

    // Candidate feature subset, sampled without replacement.
    std::vector<std::size_t> sample_features() {
        const std::size_t dim = X.cols();
        std::vector<std::size_t> all(dim);
        std::iota(all.begin(), all.end(), std::size_t{0});
        const auto take = std::min<std::size_t>(static_cast<std::size_t>(m_try), dim);
        for (std::size_t i = 0; i < take; ++i)
            std::swap(all[i], all[i + rng.uniform_index(dim - i)]);
        all.resize(take);
        return all;
    }

    struct Split {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double impurity = 0.0;
    };

    Split best_split(const std::vector<std::size_t>& samples) {
        Split best;
        const auto n = samples.size();
        const double nd = static_cast<double>(n);
        std::vector<std::pair<double, int>> ordered(n); // (value, class)
        std::vector<double> left_counts(static_cast<std::size_t>(n_classes));
        std::vector<double> right_counts(static_cast<std::size_t>(n_classes));

        for (std::size_t f : sample_features()) {
            for (std::size_t i = 0; i < n; ++i)
                ordered[i] = {X.at(samples[i], f), y[samples[i]]};
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (ordered.front().first == ordered.back().first)
                continue; // constant feature in this node

            std::fill(left_counts.begin(), left_counts.end(), 0.0);
            std::fill(right_counts.begin(), right_counts.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i)
                right_counts[static_cast<std::size_t>(ordered[i].second)] += 1.0;

            for (std::size_t k = 1; k < n; ++k) {
                const auto cls = static_cast<std::size_t>(ordered[k - 1].second);
                left_counts[cls] += 1.0;
                right_counts[cls] -= 1.0;
                if (ordered[k - 1].first == ordered[k].first)
                    continue;
                const std::size_t nl = k;
                const std::size_t nr = n - k;
                if (nl < static_cast<std::size_t>(min_samples_leaf) ||
                    nr < static_cast<std::size_t>(min_samples_leaf))
                    continue;
                double gini_l = 1.0, gini_r = 1.0;
                for (int c = 0; c < n_classes; ++c) {
                    const double pl = left_counts[static_cast<std::size_t>(c)] / static_cast<double>(nl);
                    const double pr = right_counts[static_cast<std::size_t>(c)] / static_cast<double>(nr);
                    gini_l -= pl * pl;
                    gini_r -= pr * pr;
                }
                const double impurity =
                    (static_cast<double>(nl) * gini_l + static_cast<double>(nr) * gini_r) / nd;
                if (!best.found || impurity < best.impurity) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = (ordered[k - 1].first + ordered[k].first) / 2.0;
                    best.impurity = impurity;
                }
            }
        }
        return best;
    }

    int build(const std::vector<std::size_t>& samples, int depth) {
        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        const bool depth_capped = max_depth > 0 && depth >= max_depth;
        if (samples.size() < 2 * static_cast<std::size_t>(min_samples_leaf) || depth_capped ||
            pure(samples)) {
            tree.nodes[static_cast<std::size_t>(node_index)].label = majority(samples);
            return node_index;
        }
        const Split split = best_split(samples);
        if (!split.found) {
            tree.nodes[static_cast<std::size_t>(node_index)].label = majority(samples);
            return node_index;
        }

        std::vector<std::size_t> left, right;
        for (std::size_t s : samples)
            (X.at(s, split.feature) <= split.threshold ? left : right).push_back(s);

        const int left_index = build(left, depth + 1);
        const int right_index = build(right, depth + 1);
        auto& node = tree.nodes[static_cast<std::size_t>(node_index)];
        node.feature = static_cast<int>(split.feature);
        node.threshold = split.threshold;
        node.left = left_index;
        node.right = right_index;
        return node_index;
    }
};

} // namespace

ForestModel rf_train(const FeatureMatrix& X, const std::vector<int>& labels,
                     const ForestParams& params) {
    require(!X.empty(), ErrorKind::InvalidArgument, "cannot train a forest on empty data");
    require(X.rows() == labels.size(), ErrorKind::InvalidArgument,
            "label count does not match row count");
    require(params.n_trees >= 1, ErrorKind::InvalidArgument, "n_trees must be >= 1");
    require(params.m_try <= static_cast<int>(X.cols()), ErrorKind::InvalidArgument,
            "m_try exceeds the feature dimension");
    require(params.min_samples_leaf >= 1, ErrorKind::InvalidArgument,
            "min_samples_leaf must be >= 1");

    ForestModel model;
    model.dim = X.cols();
    model.params = params;
    model.n_classes = 1 + *std::max_element(labels.begin(), labels.end());

    const int m_try = params.m_try > 0
                          ? params.m_try
                          : std::max(1, static_cast<int>(std::floor(std::sqrt(
                                            static_cast<double>(X.cols())))));

    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> bootstrap(X.rows());
        for (auto& s : bootstrap)
            s = rng.uniform_index(X.rows());
        TreeBuilder builder{X,
                            labels,
                            model.n_classes,
                            m_try,
                            params.max_depth,
                            params.min_samples_leaf,
                            rng,
                            {}};
        builder.build(bootstrap, 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

int rf_predict(const ForestModel& m, std::span<const double> x) {
    require(x.size() == m.dim, ErrorKind::InvalidArgument,
            "input dimension does not match the trained model");
    std::vector<int> votes(static_cast<std::size_t>(m.n_classes), 0);
    for (const auto& tree : m.trees)
        ++votes[static_cast<std::size_t>(tree.predict(x))];
    int best = 0;
    for (int c = 1; c < m.n_classes; ++c)
        if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)])
            best = c;
    return best;
}

} // namespace cxrsev
