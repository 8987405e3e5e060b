#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace cxrsev {

// Severity classes, in index order.
enum class ClassLabel : int { Normal = 0, NonSevere = 1, Severe = 2 };

inline constexpr int kNumClasses = 3;

const char* class_name(int label);
int class_from_name(const std::string& name); // -1 if unknown

// Six per-region radiologist ratings, each in {0, 1, 2}.
struct RegionScores {
    std::array<int, 6> scores{};

    int total() const {
        int t = 0;
        for (int s : scores)
            t += s;
        return t;
    }
};

// Thresholds on the summed score: 0 -> Normal, 1..8 -> NonSevere,
// 9..12 -> Severe.
ClassLabel severity_class(const RegionScores& s);

std::vector<double> one_hot(int label, int n_classes);

struct ManifestEntry {
    std::string path;
    int label = 0;
    bool synthetic = false;
};

struct LabeledDataset {
    std::vector<ManifestEntry> entries;

    std::size_t size() const { return entries.size(); }
    std::vector<std::size_t> class_counts(int n_classes = kNumClasses) const;
};

// Parses a manifest CSV. Header is mandatory and selects the schema:
//   path,label                with label in {normal, non_severe, severe}
//   path,r1,r2,r3,r4,r5,r6    region scores routed through severity_class
// A trailing "synthetic" column (0/1) is accepted on the label schema, as
// written by dataset exports. Errors name the offending 1-based data row.
LabeledDataset load_manifest(const std::string& csv_path);

// Writes the label schema; the synthetic column is included only on request
// (dataset exports that may carry oversampled rows).
void save_manifest(const LabeledDataset& ds, const std::string& csv_path,
                   bool with_synthetic_column = false);

struct SplitResult {
    LabeledDataset train;
    LabeledDataset test;
    std::vector<std::size_t> train_indices; // into the input dataset, ascending
    std::vector<std::size_t> test_indices;
    std::vector<std::string> warnings;
};

// Per class, floor(count * test_fraction) samples go to the test set, chosen
// by a seeded shuffle. Within each side the original dataset order is kept.
SplitResult stratified_split(const LabeledDataset& ds, double test_fraction,
                             std::uint64_t seed);

} // namespace cxrsev
