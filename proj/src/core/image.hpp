#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace cxrsev {

// 8-bit grayscale raster, row-major. Images are immutable values in practice:
// every operation returns a new image.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // row-major, size = width * height

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        require(w >= 1 && h >= 1, ErrorKind::InvalidArgument, "image dimensions must be >= 1");
    }
    GrayImage(int w, int h, std::vector<std::uint8_t> pixels)
        : width(w), height(h), data(std::move(pixels)) {
        require(w >= 1 && h >= 1, ErrorKind::InvalidArgument, "image dimensions must be >= 1");
        require(data.size() == static_cast<std::size_t>(w) * h, ErrorKind::InvalidArgument,
                "pixel count does not match width x height");
    }

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    std::size_t pixel_count() const { return data.size(); }

    bool operator==(const GrayImage& other) const = default;
};

// Reads a binary PGM (P5, maxval <= 255) or an 8-bit PNG (grayscale or RGB;
// RGB is converted through BT.601 luminance, round-half-up).
GrayImage load_image(const std::string& path);

// Writes a binary PGM: "P5\n<w> <h>\n255\n" followed by raw pixels.
// load_image(save_pgm(img)) is the identity, bit for bit.
void save_pgm(const GrayImage& img, const std::string& path);

// Bilinear resize with edge-aligned sample mapping src = (dst + 0.5) * scale - 0.5,
// source coordinates clamped to the image, results rounded to nearest.
GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h);

// Row-major copy of the image scaled to [0, 1] (intensity / 255).
std::vector<double> to_unit_reals(const GrayImage& img);

} // namespace cxrsev
