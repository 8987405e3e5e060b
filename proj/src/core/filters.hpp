#pragma once

#include "core/image.hpp"

namespace cxrsev {

// Window filters take a radius r and operate on the (2r+1) x (2r+1)
// neighborhood. Borders are handled by replicate padding throughout.

GrayImage mean_filter(const GrayImage& img, int radius);

GrayImage median_filter(const GrayImage& img, int radius);

// Gaussian-spatial x Gaussian-range weighted average, weights normalized to
// sum 1. Both sigmas must be positive.
GrayImage bilateral_filter(const GrayImage& img, int radius, double sigma_spatial,
                           double sigma_range);

// Global histogram equalization:
//   v -> round((cdf(v) - cdf_min) / (N - cdf_min) * 255)
// where cdf_min is the smallest nonzero CDF value. Constant images are
// returned unchanged (the formula is 0/0 there).
GrayImage hist_equalize(const GrayImage& img);

// Contrast-limited adaptive histogram equalization. The image is partitioned
// into tiles_x x tiles_y tiles (remainder pixels joining the last row/column),
// each tile histogram is clipped at clip_limit * tile_pixels / 256 with the
// excess redistributed uniformly in one pass, an equalization mapping is built
// per tile, and each output pixel bilinearly interpolates the mappings of the
// four surrounding tile centers (replicated at the borders).
//
// With one tile and an unbounded clip limit this reduces exactly to
// hist_equalize. clip_limit must be >= 1 (infinity disables clipping).
GrayImage clahe(const GrayImage& img, int tiles_x, int tiles_y, double clip_limit);

} // namespace cxrsev
