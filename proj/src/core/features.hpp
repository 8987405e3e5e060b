#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "core/image.hpp"
#include "core/matrix.hpp"

namespace cxrsev {

inline constexpr std::size_t kBaselineFeatureDim = 244;

// Handcrafted per-image descriptor of fixed dimension 244: a 14x14 grid of
// block mean intensities (/255), a 32-bin normalized intensity histogram, and
// a 16-bin gradient-orientation histogram weighted by central-difference
// gradient magnitude (normalized to sum 1, or all zeros when no gradient).
// The image is resized to 224x224 internally.
std::vector<double> baseline_features(const GrayImage& img);

// Mean over the 49 spatial positions per channel. Input layout is channel-last:
// value(y, x, c) = t[(y*7 + x)*channels + c], spatial size fixed at 7x7.
std::vector<double> global_average_pool(std::span<const double> t, std::size_t channels);

// Embedding file loading. Two formats, sniffed from the leading bytes:
//   binary: magic "FEM1", u32le rows, u32le cols, rows*cols f32le row-major
//   CSV:    header line "dim=<cols>", then one comma-separated row per sample
// Values are 32-bit reals in both routes. When pool is true, rows whose width
// is divisible by 49 are reduced with global_average_pool (7x7 spatial grid).
FeatureMatrix load_embeddings(const std::string& path, std::size_t expected_rows, bool pool);

void save_embeddings_binary(const FeatureMatrix& m, const std::string& path);
void save_embeddings_csv(const FeatureMatrix& m, const std::string& path);

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stdev; // population standard deviation
};

// Fit on training rows only. Columns with stdev < 1e-12 standardize to 0.
Standardizer fit_standardizer(const FeatureMatrix& X);
FeatureMatrix apply_standardizer(const Standardizer& s, const FeatureMatrix& X);

} // namespace cxrsev
