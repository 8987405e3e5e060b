#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "core/rng.hpp"

namespace cxrsev {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',')
        fields.push_back("");
    return fields;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

int parse_region_score(const std::string& field, std::size_t row) {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
        fail(ErrorKind::CorruptData,
             "malformed row " + std::to_string(row) + ": bad region score '" + field + "'");
    const int v = std::stoi(field);
    if (v < 0 || v > 2)
        fail(ErrorKind::InvalidArgument,
             "malformed row " + std::to_string(row) + ": region score " + std::to_string(v) +
                 " outside {0,1,2}");
    return v;
}

} // namespace

const char* class_name(int label) {
    switch (label) {
    case 0: return "normal";
    case 1: return "non_severe";
    case 2: return "severe";
    default: return "?";
    }
}

int class_from_name(const std::string& name) {
    const std::string n = lower(name);
    if (n == "normal")
        return 0;
    if (n == "non_severe")
        return 1;
    if (n == "severe")
        return 2;
    return -1;
}

ClassLabel severity_class(const RegionScores& s) {
    for (int v : s.scores)
        require(v >= 0 && v <= 2, ErrorKind::InvalidArgument,
                "region score " + std::to_string(v) + " outside {0,1,2}");
    const int total = s.total();
    if (total == 0)
        return ClassLabel::Normal;
    return total <= 8 ? ClassLabel::NonSevere : ClassLabel::Severe;
}

std::vector<double> one_hot(int label, int n_classes) {
    require(n_classes >= 1, ErrorKind::InvalidArgument, "n_classes must be >= 1");
    require(label >= 0 && label < n_classes, ErrorKind::InvalidArgument,
            "label index " + std::to_string(label) + " out of range for " +
                std::to_string(n_classes) + " classes");
    std::vector<double> v(static_cast<std::size_t>(n_classes), 0.0);
    v[static_cast<std::size_t>(label)] = 1.0;
    return v;
}

std::vector<std::size_t> LabeledDataset::class_counts(int n_classes) const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (const auto& e : entries)
        if (e.label >= 0 && e.label < n_classes)
            ++counts[static_cast<std::size_t>(e.label)];
    return counts;
}

LabeledDataset load_manifest(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in)
        fail(ErrorKind::NotFound, "manifest not found: " + csv_path);

    std::string line;
    if (!std::getline(in, line))
        fail(ErrorKind::CorruptData, "manifest is empty (header required): " + csv_path);
    const auto header = split_csv_line(line);

    enum class Schema { Label, LabelSynthetic, Regions } schema;
    if (header.size() == 2 && lower(header[0]) == "path" && lower(header[1]) == "label") {
        schema = Schema::Label;
    } else if (header.size() == 3 && lower(header[0]) == "path" && lower(header[1]) == "label" &&
               lower(header[2]) == "synthetic") {
        schema = Schema::LabelSynthetic;
    } else if (header.size() == 7 && lower(header[0]) == "path") {
        for (int i = 1; i <= 6; ++i)
            require(lower(header[static_cast<std::size_t>(i)]) == "r" + std::to_string(i),
                    ErrorKind::CorruptData, "unrecognized manifest header in " + csv_path);
        schema = Schema::Regions;
    } else {
        fail(ErrorKind::CorruptData,
             "unrecognized manifest header (expected 'path,label' or 'path,r1..r6'): " +
                 csv_path);
    }

    LabeledDataset ds;
    std::unordered_set<std::string> seen;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto fields = split_csv_line(line);
        const std::size_t expected =
            schema == Schema::Regions ? 7 : (schema == Schema::LabelSynthetic ? 3 : 2);
        if (fields.size() != expected || fields[0].empty())
            fail(ErrorKind::CorruptData,
                 "malformed row " + std::to_string(row) + " in " + csv_path);

        ManifestEntry entry;
        entry.path = fields[0];
        if (!seen.insert(entry.path).second)
            fail(ErrorKind::InvalidArgument,
                 "duplicate path '" + entry.path + "' at row " + std::to_string(row));

        if (schema == Schema::Regions) {
            RegionScores rs;
            for (int i = 0; i < 6; ++i)
                rs.scores[static_cast<std::size_t>(i)] =
                    parse_region_score(fields[static_cast<std::size_t>(i) + 1], row);
            entry.label = static_cast<int>(severity_class(rs));
        } else {
            entry.label = class_from_name(fields[1]);
            if (entry.label < 0)
                fail(ErrorKind::CorruptData, "malformed row " + std::to_string(row) +
                                                 ": unknown label '" + fields[1] + "'");
            if (schema == Schema::LabelSynthetic) {
                if (fields[2] != "0" && fields[2] != "1")
                    fail(ErrorKind::CorruptData, "malformed row " + std::to_string(row) +
                                                     ": synthetic flag must be 0 or 1");
                entry.synthetic = fields[2] == "1";
            }
        }
        ds.entries.push_back(std::move(entry));
    }
    return ds;
}

void save_manifest(const LabeledDataset& ds, const std::string& csv_path,
                   bool with_synthetic_column) {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out)
        fail(ErrorKind::Io, "cannot write manifest: " + csv_path);
    out << (with_synthetic_column ? "path,label,synthetic\n" : "path,label\n");
    for (const auto& e : ds.entries) {
        out << e.path << ',' << class_name(e.label);
        if (with_synthetic_column)
            out << ',' << (e.synthetic ? 1 : 0);
        out << '\n';
    }
    if (!out)
        fail(ErrorKind::Io, "write failed: " + csv_path);
}

SplitResult stratified_split(const LabeledDataset& ds, double test_fraction,
                             std::uint64_t seed) {
    require(test_fraction > 0.0 && test_fraction < 1.0, ErrorKind::InvalidArgument,
            "test_fraction must be in (0,1)");

    int max_label = 0;
    for (const auto& e : ds.entries)
        max_label = std::max(max_label, e.label);
    const int n_classes = max_label + 1;

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(n_classes));
    for (std::size_t i = 0; i < ds.entries.size(); ++i)
        by_class[static_cast<std::size_t>(ds.entries[i].label)].push_back(i);

    for (int c = 0; c < n_classes; ++c)
        require(by_class[static_cast<std::size_t>(c)].size() >= 2, ErrorKind::InvalidArgument,
                "class '" + std::string(class_name(c)) + "' has fewer than 2 samples");

    SplitResult result;
    std::vector<bool> is_test(ds.entries.size(), false);
    Rng rng(seed);
    for (int c = 0; c < n_classes; ++c) {
        auto indices = by_class[static_cast<std::size_t>(c)];
        // Fisher-Yates with the shared stream; classes are visited in
        // ascending label order so the split is reproducible.
        for (std::size_t i = indices.size(); i > 1; --i)
            std::swap(indices[i - 1], indices[rng.uniform_index(i)]);
        const auto n_test =
            static_cast<std::size_t>(std::floor(static_cast<double>(indices.size()) * test_fraction));
        if (n_test == 0)
            result.warnings.push_back("class '" + std::string(class_name(c)) +
                                      "' contributes 0 test samples");
        for (std::size_t i = 0; i < n_test; ++i)
            is_test[indices[i]] = true;
    }

    for (std::size_t i = 0; i < ds.entries.size(); ++i) {
        if (is_test[i]) {
            result.test.entries.push_back(ds.entries[i]);
            result.test_indices.push_back(i);
        } else {
            result.train.entries.push_back(ds.entries[i]);
            result.train_indices.push_back(i);
        }
    }
    return result;
}

} // namespace cxrsev
