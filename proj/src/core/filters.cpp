#include "core/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace cxrsev {

namespace {

int clamp_coord(int v, int lo, int hi) { return std::clamp(v, lo, hi); }

std::uint8_t round_u8(double v) {
    const int r = static_cast<int>(std::floor(v + 0.5));
    return static_cast<std::uint8_t>(std::clamp(r, 0, 255));
}

void check_radius(int radius) {
    require(radius >= 1, ErrorKind::InvalidArgument, "filter window radius must be >= 1");
}

// Rounded equalization mapping for one 256-bin histogram with real-valued
// counts. total is the pixel count covered by the histogram.
std::array<int, 256> equalize_mapping(const std::array<double, 256>& hist, double total) {
    std::array<int, 256> map{};
    double cdf_min = 0.0;
    for (int v = 0; v < 256; ++v) {
        if (hist[v] > 0.0) {
            double cdf = 0.0;
            for (int u = 0; u <= v; ++u)
                cdf += hist[u];
            cdf_min = cdf;
            break;
        }
    }
    const double denom = total - cdf_min;
    if (denom <= 0.0) {
        // Single occupied bin: identity completion.
        for (int v = 0; v < 256; ++v)
            map[v] = v;
        return map;
    }
    double cdf = 0.0;
    for (int v = 0; v < 256; ++v) {
        cdf += hist[v];
        map[v] = static_cast<int>(std::floor((cdf - cdf_min) / denom * 255.0 + 0.5));
        map[v] = std::clamp(map[v], 0, 255);
    }
    return map;
}

} // namespace

GrayImage mean_filter(const GrayImage& img, int radius) {
    check_radius(radius);
    GrayImage out(img.width, img.height);
    const int count = (2 * radius + 1) * (2 * radius + 1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            long sum = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    sum += img.at(clamp_coord(x + dx, 0, img.width - 1),
                                  clamp_coord(y + dy, 0, img.height - 1));
            out.at(x, y) = round_u8(static_cast<double>(sum) / count);
        }
    }
    return out;
}

GrayImage median_filter(const GrayImage& img, int radius) {
    check_radius(radius);
    GrayImage out(img.width, img.height);
    const int side = 2 * radius + 1;
    std::vector<std::uint8_t> window(static_cast<std::size_t>(side) * side);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            std::size_t n = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx)
                    window[n++] = img.at(clamp_coord(x + dx, 0, img.width - 1),
                                         clamp_coord(y + dy, 0, img.height - 1));
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(n / 2);
            std::nth_element(window.begin(), mid, window.begin() + static_cast<std::ptrdiff_t>(n));
            out.at(x, y) = *mid;
        }
    }
    return out;
}

GrayImage bilateral_filter(const GrayImage& img, int radius, double sigma_spatial,
                           double sigma_range) {
    check_radius(radius);
    require(sigma_spatial > 0.0 && sigma_range > 0.0, ErrorKind::InvalidArgument,
            "bilateral filter sigmas must be positive");
    const int side = 2 * radius + 1;
    std::vector<double> spatial(static_cast<std::size_t>(side) * side);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            spatial[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] =
                std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_spatial * sigma_spatial));

    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double center = img.at(x, y);
            double wsum = 0.0;
            double acc = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                for (int dx = -radius; dx <= radius; ++dx) {
                    const double v = img.at(clamp_coord(x + dx, 0, img.width - 1),
                                            clamp_coord(y + dy, 0, img.height - 1));
                    const double diff = v - center;
                    const double w =
                        spatial[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] *
                        std::exp(-diff * diff / (2.0 * sigma_range * sigma_range));
                    wsum += w;
                    acc += w * v;
                }
            }
            out.at(x, y) = round_u8(acc / wsum);
        }
    }
    return out;
}

GrayImage hist_equalize(const GrayImage& img) {
    std::array<double, 256> hist{};
    for (std::uint8_t v : img.data)
        hist[v] += 1.0;
    const bool constant =
        std::count_if(hist.begin(), hist.end(), [](double c) { return c > 0.0; }) <= 1;
    if (constant)
        return img;
    const auto map = equalize_mapping(hist, static_cast<double>(img.pixel_count()));
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = static_cast<std::uint8_t>(map[img.data[i]]);
    return out;
}

GrayImage clahe(const GrayImage& img, int tiles_x, int tiles_y, double clip_limit) {
    require(tiles_x >= 1 && tiles_y >= 1, ErrorKind::InvalidArgument,
            "tile counts must be >= 1");
    require(tiles_x <= img.width && tiles_y <= img.height, ErrorKind::InvalidArgument,
            "tile counts exceed image dimensions");
    require(clip_limit >= 1.0, ErrorKind::InvalidArgument, "clip limit must be >= 1");

    const int base_w = img.width / tiles_x;
    const int base_h = img.height / tiles_y;
    auto tile_x0 = [&](int tx) { return tx * base_w; };
    auto tile_y0 = [&](int ty) { return ty * base_h; };
    auto tile_w = [&](int tx) { return (tx == tiles_x - 1) ? img.width - tx * base_w : base_w; };
    auto tile_h = [&](int ty) { return (ty == tiles_y - 1) ? img.height - ty * base_h : base_h; };

    // Per-tile rounded equalization mappings.
    std::vector<std::array<int, 256>> maps(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            std::array<double, 256> hist{};
            for (int y = tile_y0(ty); y < tile_y0(ty) + tile_h(ty); ++y)
                for (int x = tile_x0(tx); x < tile_x0(tx) + tile_w(tx); ++x)
                    hist[img.at(x, y)] += 1.0;
            const double n_pix = static_cast<double>(tile_w(tx)) * tile_h(ty);
            auto& map = maps[static_cast<std::size_t>(ty) * tiles_x + tx];

            const int occupied =
                static_cast<int>(std::count_if(hist.begin(), hist.end(),
                                               [](double c) { return c > 0.0; }));
            if (occupied <= 1) {
                // Constant tile: identity, matching the global HE degenerate rule.
                for (int v = 0; v < 256; ++v)
                    map[v] = v;
                continue;
            }

            if (std::isfinite(clip_limit)) {
                const double threshold = clip_limit * n_pix / 256.0;
                double excess = 0.0;
                for (double& c : hist) {
                    if (c > threshold) {
                        excess += c - threshold;
                        c = threshold;
                    }
                }
                // One uniform redistribution pass; bins may re-exceed the
                // threshold and are left as-is.
                const double share = excess / 256.0;
                for (double& c : hist)
                    c += share;
            }
            map = equalize_mapping(hist, n_pix);
        }
    }

    // Tile center x/y coordinates used as interpolation knots.
    std::vector<double> cx(static_cast<std::size_t>(tiles_x));
    std::vector<double> cy(static_cast<std::size_t>(tiles_y));
    for (int tx = 0; tx < tiles_x; ++tx)
        cx[static_cast<std::size_t>(tx)] = tile_x0(tx) + (tile_w(tx) - 1) / 2.0;
    for (int ty = 0; ty < tiles_y; ++ty)
        cy[static_cast<std::size_t>(ty)] = tile_y0(ty) + (tile_h(ty) - 1) / 2.0;

    // For a coordinate, the bracketing knot pair and blend weight.
    auto locate = [](const std::vector<double>& centers, double pos, int& i0, int& i1,
                     double& w) {
        const int last = static_cast<int>(centers.size()) - 1;
        if (pos <= centers[0]) {
            i0 = i1 = 0;
            w = 0.0;
            return;
        }
        if (pos >= centers[static_cast<std::size_t>(last)]) {
            i0 = i1 = last;
            w = 0.0;
            return;
        }
        int i = 0;
        while (pos > centers[static_cast<std::size_t>(i + 1)])
            ++i;
        i0 = i;
        i1 = i + 1;
        w = (pos - centers[static_cast<std::size_t>(i0)]) /
            (centers[static_cast<std::size_t>(i1)] - centers[static_cast<std::size_t>(i0)]);
    };

    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        int ty0 = 0, ty1 = 0;
        double wy = 0.0;
        locate(cy, y, ty0, ty1, wy);
        for (int x = 0; x < img.width; ++x) {
            int tx0 = 0, tx1 = 0;
            double wx = 0.0;
            locate(cx, x, tx0, tx1, wx);
            const int v = img.at(x, y);
            const double m00 = maps[static_cast<std::size_t>(ty0) * tiles_x + tx0][v];
            const double m01 = maps[static_cast<std::size_t>(ty0) * tiles_x + tx1][v];
            const double m10 = maps[static_cast<std::size_t>(ty1) * tiles_x + tx0][v];
            const double m11 = maps[static_cast<std::size_t>(ty1) * tiles_x + tx1][v];
            const double top = (1.0 - wx) * m00 + wx * m01;
            const double bottom = (1.0 - wx) * m10 + wx * m11;
            out.at(x, y) = round_u8((1.0 - wy) * top + wy * bottom);
        }
    }
    return out;
}

} // namespace cxrsev
