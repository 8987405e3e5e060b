#pragma once

#include <cstdint>
#include <string>

#include "core/dataset.hpp"
#include "core/image.hpp"

namespace cxrsev {

// One procedural radiograph-like texture. Class identity shows up in spatial
// structure (blob count/size, noise energy), not just brightness, so the
// statistics survive histogram equalization.
GrayImage synthetic_image(int label, int size, std::uint64_t seed);

// Writes per_class images per class (PGM) plus manifest.csv into out_dir.
// Fully determined by the seed.
LabeledDataset gen_synthetic(const std::string& out_dir, int per_class, int size,
                             std::uint64_t seed);

} // namespace cxrsev
