#include "core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "core/rng.hpp"

namespace cxrsev {

namespace {

struct Blob {
    double cx, cy, radius, strength;
};

} // namespace

GrayImage synthetic_image(int label, int size, std::uint64_t seed) {
    require(label >= 0 && label < kNumClasses, ErrorKind::InvalidArgument,
            "synthetic label out of range");
    require(size >= 16, ErrorKind::InvalidArgument, "synthetic image size must be >= 16");
    Rng rng(seed);

    // Class recipe: normal stays smooth, non-severe gains a few small
    // opacities, severe gains many large ones plus heavier grain.
    int blob_count = 0;
    double blob_radius = 0.0, blob_strength = 0.0, noise_amp = 0.0;
    switch (label) {
    case 0:
        blob_count = 0;
        noise_amp = 4.0;
        break;
    case 1:
        blob_count = 4 + static_cast<int>(rng.uniform_index(3)); // 4..6
        blob_radius = size * 0.05;
        blob_strength = 55.0;
        noise_amp = 8.0;
        break;
    default:
        blob_count = 14 + static_cast<int>(rng.uniform_index(5)); // 14..18
        blob_radius = size * 0.11;
        blob_strength = 70.0;
        noise_amp = 14.0;
        break;
    }

    std::vector<Blob> blobs;
    blobs.reserve(static_cast<std::size_t>(blob_count));
    for (int b = 0; b < blob_count; ++b) {
        blobs.push_back({rng.uniform(0.1, 0.9) * size, rng.uniform(0.1, 0.9) * size,
                         blob_radius * rng.uniform(0.7, 1.3),
                         blob_strength * rng.uniform(0.8, 1.2)});
    }

    const double phase = rng.uniform(0.0, 6.28318);
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            // Lung-field backdrop: vertical falloff plus a soft horizontal vignette.
            const double fy = static_cast<double>(y) / (size - 1);
            const double fx = static_cast<double>(x) / (size - 1);
            double v = 150.0 - 60.0 * fy - 25.0 * std::abs(fx - 0.5) * 2.0;
            v += 10.0 * std::sin(fy * 9.0 + phase);
            for (const Blob& b : blobs) {
                const double dx = x - b.cx;
                const double dy = y - b.cy;
                v += b.strength * std::exp(-(dx * dx + dy * dy) / (2.0 * b.radius * b.radius));
            }
            v += noise_amp * rng.normal();
            img.at(x, y) = static_cast<std::uint8_t>(
                std::clamp(static_cast<int>(std::floor(v + 0.5)), 0, 255));
        }
    }
    return img;
}

LabeledDataset gen_synthetic(const std::string& out_dir, int per_class, int size,
                             std::uint64_t seed) {
    require(per_class >= 1, ErrorKind::InvalidArgument, "per_class must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        fail(ErrorKind::Io, "cannot create output directory: " + out_dir);

    LabeledDataset ds;
    char name[64];
    for (int c = 0; c < kNumClasses; ++c) {
        for (int i = 0; i < per_class; ++i) {
            std::snprintf(name, sizeof name, "%s_%03d.pgm", class_name(c), i);
            const GrayImage img = synthetic_image(
                c, size, derive_seed(seed, static_cast<std::uint64_t>(c) * 100000 + i));
            save_pgm(img, (std::filesystem::path(out_dir) / name).string());
            ds.entries.push_back({name, c, false});
        }
    }
    save_manifest(ds, (std::filesystem::path(out_dir) / "manifest.csv").string());
    return ds;
}

} // namespace cxrsev
