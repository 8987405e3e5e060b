#include "core/smote.hpp"

#include <algorithm>
#include <numeric>

#include "core/rng.hpp"

namespace cxrsev {

std::vector<std::size_t> knn_indices(const FeatureMatrix& X, std::size_t i, int k) {
    require(i < X.rows(), ErrorKind::InvalidArgument, "row index out of range");
    require(k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
    require(static_cast<std::size_t>(k) < X.rows(), ErrorKind::InvalidArgument,
            "k must be smaller than the number of rows");

    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(X.rows() - 1);
    for (std::size_t j = 0; j < X.rows(); ++j) {
        if (j == i)
            continue;
        dist.emplace_back(squared_distance(X.row(i), X.row(j)), j);
    }
    // Pair ordering breaks distance ties toward the lower index.
    std::sort(dist.begin(), dist.end());
    std::vector<std::size_t> out(static_cast<std::size_t>(k));
    for (int n = 0; n < k; ++n)
        out[static_cast<std::size_t>(n)] = dist[static_cast<std::size_t>(n)].second;
    return out;
}

std::vector<double> smote_sample(std::span<const double> x, std::span<const double> xr,
                                 double u) {
    require(x.size() == xr.size(), ErrorKind::InvalidArgument,
            "smote_sample dimension mismatch");
    std::vector<double> s(x.size());
    for (std::size_t d = 0; d < x.size(); ++d)
        s[d] = x[d] + u * (xr[d] - x[d]);
    return s;
}

FeatureMatrix smote_oversample(const FeatureMatrix& minority, std::size_t n_new,
                               const SmoteConfig& cfg, std::vector<SmoteOrigin>* origins) {
    require(cfg.k >= 1, ErrorKind::InvalidArgument, "k must be >= 1");
    require(minority.rows() > static_cast<std::size_t>(cfg.k), ErrorKind::InvalidArgument,
            "minority class size " + std::to_string(minority.rows()) +
                " must exceed k = " + std::to_string(cfg.k));

    // Neighbor lists are fixed for the whole run, so compute them up front.
    std::vector<std::vector<std::size_t>> neighbors(minority.rows());
    for (std::size_t i = 0; i < minority.rows(); ++i)
        neighbors[i] = knn_indices(minority, i, cfg.k);

    FeatureMatrix out(0, minority.cols());
    if (origins)
        origins->clear();
    Rng rng(cfg.seed);
    for (std::size_t n = 0; n < n_new; ++n) {
        const std::size_t base = rng.uniform_index(minority.rows());
        const std::size_t pick = rng.uniform_index(static_cast<std::size_t>(cfg.k));
        const std::size_t neighbor = neighbors[base][pick];
        const double u = rng.uniform01();
        out.append_row(smote_sample(minority.row(base), minority.row(neighbor), u));
        if (origins)
            origins->push_back({base, neighbor, u});
    }
    return out;
}

BalancedData balance_dataset(const FeatureMatrix& X, const std::vector<int>& labels,
                             const SmoteConfig& cfg) {
    require(X.rows() == labels.size(), ErrorKind::InvalidArgument,
            "feature row count does not match label count");
    require(!labels.empty(), ErrorKind::InvalidArgument, "cannot balance an empty dataset");

    const int n_classes = 1 + *std::max_element(labels.begin(), labels.end());
    require(n_classes >= 2, ErrorKind::InvalidArgument,
            "balancing requires at least 2 classes");

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);

    std::size_t target = 0;
    for (const auto& idx : by_class)
        target = std::max(target, idx.size());

    BalancedData result;
    result.X = X;
    result.labels = labels;
    result.synthetic.assign(labels.size(), false);

    for (int c = 0; c < n_classes; ++c) {
        const auto& idx = by_class[static_cast<std::size_t>(c)];
        const std::size_t n_new = target - idx.size();
        if (n_new == 0)
            continue;
        require(idx.size() > static_cast<std::size_t>(cfg.k), ErrorKind::InvalidArgument,
                "class '" + std::to_string(c) + "' has " + std::to_string(idx.size()) +
                    " samples, not enough for k = " + std::to_string(cfg.k));
        const FeatureMatrix minority = X.select_rows(idx);
        SmoteConfig class_cfg = cfg;
        class_cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(c));
        const FeatureMatrix synth = smote_oversample(minority, n_new, class_cfg);
        for (std::size_t r = 0; r < synth.rows(); ++r) {
            result.X.append_row(synth.row(r));
            result.labels.push_back(c);
            result.synthetic.push_back(true);
        }
    }
    return result;
}

} // namespace cxrsev
