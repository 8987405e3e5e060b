#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "core/error.hpp"

namespace cxrsev {

// Dense row-major matrix of doubles. Feature vectors are rows.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
    FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), values_(std::move(values)) {
        require(values_.size() == rows_ * cols_, ErrorKind::InvalidArgument,
                "matrix value count does not match rows x cols");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
    double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {values_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }

    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    void append_row(std::span<const double> v) {
        require(v.size() == cols_ || rows_ == 0, ErrorKind::InvalidArgument,
                "appended row has wrong dimension");
        if (rows_ == 0)
            cols_ = v.size();
        values_.insert(values_.end(), v.begin(), v.end());
        ++rows_;
    }

    // Rows of this matrix restricted to the given indices, in the given order.
    FeatureMatrix select_rows(std::span<const std::size_t> indices) const {
        FeatureMatrix out(indices.size(), cols_);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            auto src = row(indices[i]);
            std::copy(src.begin(), src.end(), out.row(i).begin());
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::InvalidArgument,
            "dimension mismatch in distance computation");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

} // namespace cxrsev
