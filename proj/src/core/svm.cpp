#include "core/svm.hpp"

#include <algorithm>
#include <cmath>

#include "core/rng.hpp"

namespace cxrsev {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    require(gamma >= 0.0, ErrorKind::InvalidArgument, "gamma must be >= 0");
    return std::exp(-gamma * squared_distance(a, b));
}

double resolve_gamma(const SvmParams& params, const FeatureMatrix& X) {
    if (params.gamma > 0.0)
        return params.gamma;
    require(!X.empty(), ErrorKind::InvalidArgument, "cannot resolve gamma on empty data");
    double mean = 0.0;
    for (double v : X.values())
        mean += v;
    mean /= static_cast<double>(X.values().size());
    double var = 0.0;
    for (double v : X.values())
        var += (v - mean) * (v - mean);
    var /= static_cast<double>(X.values().size());
    const double dim = static_cast<double>(X.cols());
    return var < 1e-12 ? 1.0 / dim : 1.0 / (dim * var);
}

namespace {

// SMO working state for one binary problem. The Gram matrix is precomputed
// (training sets here are at most a few thousand rows) and the error cache
// E_i = f(x_i) - y_i is maintained incrementally.
class SmoSolver {
public:
    SmoSolver(const FeatureMatrix& X, const std::vector<int>& y, double C, double gamma,
              double tol, std::uint64_t seed)
        : X_(X), y_(y), C_(C), tol_(tol), n_(X.rows()), rng_(seed) {
        gram_.resize(n_ * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            gram_[i * n_ + i] = 1.0;
            for (std::size_t j = i + 1; j < n_; ++j) {
                const double k = rbf_kernel(X.row(i), X.row(j), gamma);
                gram_[i * n_ + j] = k;
                gram_[j * n_ + i] = k;
            }
        }
        alphas_.assign(n_, 0.0);
        errors_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i)
            errors_[i] = -y_[i]; // f = 0 initially
        min_step_ = std::max(1e-12, tol * 1e-2);
    }

    // One sweep over all rows; returns the number of successful pair updates.
    int sweep() {
        int changed = 0;
        for (std::size_t i = 0; i < n_; ++i)
            if (violates_kkt(i) && examine(i))
                ++changed;
        return changed;
    }

    double max_kkt_violation() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double r = errors_[i] * y_[i];
            if (alphas_[i] < C_)
                worst = std::max(worst, -r); // r >= 0 required when alpha < C
            if (alphas_[i] > 0.0)
                worst = std::max(worst, r); // r <= 0 required when alpha > 0
        }
        return worst;
    }

    const std::vector<double>& alphas() const { return alphas_; }
    double bias() const { return bias_; }

private:
    double kernel(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }

    bool violates_kkt(std::size_t i) const {
        const double r = errors_[i] * y_[i];
        return (r < -tol_ && alphas_[i] < C_) || (r > tol_ && alphas_[i] > 0.0);
    }

    bool examine(std::size_t i) {
        // Second-choice heuristic: the partner with the largest |E_i - E_j|.
        std::size_t best = i;
        double best_gap = -1.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (j == i)
                continue;
            const double gap = std::abs(errors_[i] - errors_[j]);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best != i && take_step(i, best))
            return true;
        // Fallback: scan every partner from a seeded random start.
        const std::size_t start = rng_.uniform_index(n_);
        for (std::size_t off = 0; off < n_; ++off) {
            const std::size_t j = (start + off) % n_;
            if (j == i || j == best)
                continue;
            if (take_step(i, j))
                return true;
        }
        return false;
    }

    bool take_step(std::size_t i, std::size_t j) {
        const double ai = alphas_[i];
        const double aj = alphas_[j];
        const int yi = y_[i];
        const int yj = y_[j];

        double lo, hi;
        if (yi != yj) {
            lo = std::max(0.0, aj - ai);
            hi = std::min(C_, C_ + aj - ai);
        } else {
            lo = std::max(0.0, ai + aj - C_);
            hi = std::min(C_, ai + aj);
        }
        if (lo >= hi)
            return false;

        const double eta = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
        if (eta <= 0.0)
            return false; // degenerate direction; the fallback scan moves on

        double aj_new = aj + yj * (errors_[i] - errors_[j]) / eta;
        aj_new = std::clamp(aj_new, lo, hi);
        if (std::abs(aj_new - aj) < min_step_)
            return false;
        const double ai_new = ai + yi * yj * (aj - aj_new);

        const double di = yi * (ai_new - ai);
        const double dj = yj * (aj_new - aj);
        const double b1 = bias_ - errors_[i] - di * kernel(i, i) - dj * kernel(i, j);
        const double b2 = bias_ - errors_[j] - di * kernel(i, j) - dj * kernel(j, j);
        double bias_new;
        if (ai_new > 0.0 && ai_new < C_)
            bias_new = b1;
        else if (aj_new > 0.0 && aj_new < C_)
            bias_new = b2;
        else
            bias_new = (b1 + b2) / 2.0;

        const double db = bias_new - bias_;
        for (std::size_t k = 0; k < n_; ++k)
            errors_[k] += di * kernel(i, k) + dj * kernel(j, k) + db;

        alphas_[i] = ai_new;
        alphas_[j] = aj_new;
        bias_ = bias_new;
        return true;
    }

    const FeatureMatrix& X_;
    const std::vector<int>& y_;
    double C_;
    double tol_;
    std::size_t n_;
    Rng rng_;
    std::vector<double> gram_;
    std::vector<double> alphas_;
    std::vector<double> errors_;
    double bias_ = 0.0;
    double min_step_ = 1e-5;
};

} // namespace

SvmBinaryModel svm_train_binary(const FeatureMatrix& X, const std::vector<int>& y,
                                const SvmParams& params, SvmTrainInfo* info) {
    require(X.rows() == y.size(), ErrorKind::InvalidArgument,
            "label count does not match row count");
    require(params.C > 0.0, ErrorKind::InvalidArgument, "C must be positive");
    require(params.max_passes >= 1, ErrorKind::InvalidArgument, "max_passes must be >= 1");
    bool has_pos = false, has_neg = false;
    for (int v : y) {
        require(v == 1 || v == -1, ErrorKind::InvalidArgument, "labels must be -1 or +1");
        (v == 1 ? has_pos : has_neg) = true;
    }
    require(has_pos && has_neg, ErrorKind::InvalidArgument,
            "training data contains a single class");

    const double gamma = resolve_gamma(params, X);
    SmoSolver solver(X, y, params.C, gamma, params.tol, params.seed);

    int sweeps = 0;
    bool quiet = false;
    while (sweeps < params.max_passes) {
        const int changed = solver.sweep();
        ++sweeps;
        if (changed == 0) {
            quiet = true;
            break;
        }
    }
    const double worst = solver.max_kkt_violation();
    const bool converged = quiet && worst <= params.tol;

    SvmBinaryModel model;
    model.gamma = gamma;
    model.C = params.C;
    model.bias = solver.bias();
    model.converged = converged;
    model.support_vectors = FeatureMatrix(0, X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        if (solver.alphas()[i] > 1e-12) {
            model.support_vectors.append_row(X.row(i));
            model.dual_coef.push_back(solver.alphas()[i] * y[i]);
        }
    }
    if (info) {
        info->alphas = solver.alphas();
        info->bias = solver.bias();
        info->sweeps = sweeps;
        info->max_kkt_violation = worst;
        info->converged = converged;
    }
    return model;
}

double svm_decision(const SvmBinaryModel& m, std::span<const double> x) {
    double f = m.bias;
    for (std::size_t s = 0; s < m.support_vectors.rows(); ++s)
        f += m.dual_coef[s] * rbf_kernel(m.support_vectors.row(s), x, m.gamma);
    return f;
}

MultiClassSvm svm_train(const FeatureMatrix& X, const std::vector<int>& labels,
                        const SvmParams& params) {
    require(X.rows() == labels.size(), ErrorKind::InvalidArgument,
            "label count does not match row count");
    MultiClassSvm m;
    m.dim = X.cols();
    m.classes = labels;
    std::sort(m.classes.begin(), m.classes.end());
    m.classes.erase(std::unique(m.classes.begin(), m.classes.end()), m.classes.end());
    require(m.classes.size() >= 2, ErrorKind::InvalidArgument,
            "multiclass training requires at least 2 classes");

    std::uint64_t pair_index = 0;
    for (std::size_t a = 0; a < m.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < m.classes.size(); ++b, ++pair_index) {
            std::vector<std::size_t> rows;
            std::vector<int> y;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == m.classes[a]) {
                    rows.push_back(i);
                    y.push_back(+1);
                } else if (labels[i] == m.classes[b]) {
                    rows.push_back(i);
                    y.push_back(-1);
                }
            }
            SvmParams pair_params = params;
            pair_params.seed = derive_seed(params.seed, pair_index);
            PairwiseSvm pair;
            pair.class_a = m.classes[a];
            pair.class_b = m.classes[b];
            pair.model = svm_train_binary(X.select_rows(rows), y, pair_params);
            m.pairs.push_back(std::move(pair));
        }
    }
    return m;
}

int svm_predict(const MultiClassSvm& m, std::span<const double> x) {
    require(x.size() == m.dim, ErrorKind::InvalidArgument,
            "input dimension does not match the trained model");
    const int max_class = *std::max_element(m.classes.begin(), m.classes.end());
    std::vector<int> votes(static_cast<std::size_t>(max_class) + 1, 0);
    std::vector<double> magnitude(static_cast<std::size_t>(max_class) + 1, 0.0);
    for (const auto& pair : m.pairs) {
        const double f = svm_decision(pair.model, x);
        const int winner = f > 0.0 ? pair.class_a : pair.class_b;
        ++votes[static_cast<std::size_t>(winner)];
        magnitude[static_cast<std::size_t>(pair.class_a)] += std::abs(f);
        magnitude[static_cast<std::size_t>(pair.class_b)] += std::abs(f);
    }
    int best = m.classes.front();
    for (int c : m.classes) {
        const auto ci = static_cast<std::size_t>(c);
        const auto bi = static_cast<std::size_t>(best);
        if (votes[ci] > votes[bi] ||
            (votes[ci] == votes[bi] && magnitude[ci] > magnitude[bi]))
            best = c; // classes ascend, so equal vote+magnitude keeps the lower index
    }
    return best;
}

double svm_dual_objective(const FeatureMatrix& X, const std::vector<int>& y,
                          const std::vector<double>& alphas, double gamma) {
    require(X.rows() == y.size() && X.rows() == alphas.size(), ErrorKind::InvalidArgument,
            "dual objective size mismatch");
    double obj = 0.0;
    for (double a : alphas)
        obj += a;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        if (alphas[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < X.rows(); ++j) {
            if (alphas[j] == 0.0)
                continue;
            obj -= 0.5 * alphas[i] * alphas[j] * y[i] * y[j] *
                   rbf_kernel(X.row(i), X.row(j), gamma);
        }
    }
    return obj;
}

} // namespace cxrsev
