#include "core/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cxrsev {

namespace {

constexpr int kNetInput = 224;
constexpr int kGridSize = 14;
constexpr int kIntensityBins = 32;
constexpr int kOrientationBins = 16;
constexpr double kPi = 3.141592653589793238462643383279502884;

void append_f32le(std::string& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    for (int i = 0; i < 4; ++i)
        buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

float read_f32le(const unsigned char* p) {
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i)
        bits |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

std::uint32_t read_u32le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
}

FeatureMatrix load_embeddings_csv(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line))
        fail(ErrorKind::CorruptData, "empty embedding file: " + path);
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line.rfind("dim=", 0) != 0)
        fail(ErrorKind::CorruptData, "bad embedding CSV header (expected 'dim=<cols>'): " + path);
    std::size_t cols = 0;
    try {
        cols = std::stoul(line.substr(4));
    } catch (const std::exception&) {
        fail(ErrorKind::CorruptData, "bad embedding CSV header: " + path);
    }
    require(cols >= 1, ErrorKind::CorruptData, "embedding dimension must be >= 1: " + path);

    FeatureMatrix m(0, cols);
    std::vector<double> row(cols);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string field;
        std::size_t c = 0;
        while (std::getline(fields, field, ',')) {
            if (c < cols) {
                try {
                    // Values are 32-bit reals; parse and snap to float precision.
                    row[c] = static_cast<double>(static_cast<float>(std::stod(field)));
                } catch (const std::exception&) {
                    fail(ErrorKind::CorruptData, "bad embedding value at line " +
                                                     std::to_string(line_no) + ": " + path);
                }
            }
            ++c;
        }
        if (c != cols)
            fail(ErrorKind::CorruptData, "embedding row at line " + std::to_string(line_no) +
                                             " has " + std::to_string(c) + " values, expected " +
                                             std::to_string(cols) + ": " + path);
        m.append_row(row);
    }
    return m;
}

FeatureMatrix load_embeddings_binary(std::istream& in, const std::string& path) {
    unsigned char header[12];
    in.read(reinterpret_cast<char*>(header), 12);
    if (in.gcount() != 12)
        fail(ErrorKind::CorruptData, "truncated embedding header: " + path);
    const std::size_t rows = read_u32le(header + 4);
    const std::size_t cols = read_u32le(header + 8);
    require(cols >= 1, ErrorKind::CorruptData, "embedding dimension must be >= 1: " + path);

    std::vector<unsigned char> raw(rows * cols * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        fail(ErrorKind::CorruptData, "truncated embedding payload: " + path);

    FeatureMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i)
        m.values()[i] = static_cast<double>(read_f32le(raw.data() + i * 4));
    return m;
}

} // namespace

std::vector<double> baseline_features(const GrayImage& input) {
    const GrayImage img = (input.width == kNetInput && input.height == kNetInput)
                              ? input
                              : resize_bilinear(input, kNetInput, kNetInput);

    std::vector<double> features;
    features.reserve(kBaselineFeatureDim);

    // 14x14 block means, each /255.
    const int block = kNetInput / kGridSize;
    for (int gy = 0; gy < kGridSize; ++gy) {
        for (int gx = 0; gx < kGridSize; ++gx) {
            long sum = 0;
            for (int y = gy * block; y < (gy + 1) * block; ++y)
                for (int x = gx * block; x < (gx + 1) * block; ++x)
                    sum += img.at(x, y);
            features.push_back(static_cast<double>(sum) / (block * block) / 255.0);
        }
    }

    // 32-bin intensity histogram, normalized to sum 1.
    std::array<double, kIntensityBins> hist{};
    for (std::uint8_t v : img.data)
        hist[static_cast<std::size_t>(v / (256 / kIntensityBins))] += 1.0;
    for (double h : hist)
        features.push_back(h / static_cast<double>(img.pixel_count()));

    // 16-bin gradient orientation histogram from central differences,
    // magnitude-weighted, coordinates clamped at the borders.
    std::array<double, kOrientationBins> orient{};
    double total_mag = 0.0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double gx = (img.at(std::min(x + 1, img.width - 1), y) -
                               img.at(std::max(x - 1, 0), y)) /
                              2.0;
            const double gy = (img.at(x, std::min(y + 1, img.height - 1)) -
                               img.at(x, std::max(y - 1, 0))) /
                              2.0;
            const double mag = std::sqrt(gx * gx + gy * gy);
            if (mag == 0.0)
                continue;
            const double theta = std::atan2(gy, gx); // [-pi, pi]
            int bin = static_cast<int>(std::floor((theta + kPi) / (2.0 * kPi) * kOrientationBins));
            bin = std::clamp(bin, 0, kOrientationBins - 1);
            orient[static_cast<std::size_t>(bin)] += mag;
            total_mag += mag;
        }
    }
    for (double o : orient)
        features.push_back(total_mag > 0.0 ? o / total_mag : 0.0);

    return features;
}

std::vector<double> global_average_pool(std::span<const double> t, std::size_t channels) {
    require(channels >= 1, ErrorKind::InvalidArgument, "channel count must be >= 1");
    require(t.size() == 49 * channels, ErrorKind::InvalidArgument,
            "tensor size does not match 7x7x" + std::to_string(channels));
    std::vector<double> out(channels, 0.0);
    for (std::size_t pos = 0; pos < 49; ++pos)
        for (std::size_t c = 0; c < channels; ++c)
            out[c] += t[pos * channels + c];
    for (double& v : out)
        v /= 49.0;
    return out;
}

FeatureMatrix load_embeddings(const std::string& path, std::size_t expected_rows, bool pool) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path))
            fail(ErrorKind::NotFound, "embedding file not found: " + path);
        fail(ErrorKind::Io, "cannot open embedding file: " + path);
    }
    char magic[4] = {};
    in.read(magic, 4);
    const bool binary = in.gcount() == 4 && std::memcmp(magic, "FEM1", 4) == 0;
    in.seekg(0);
    in.clear();
    FeatureMatrix m = binary ? load_embeddings_binary(in, path) : load_embeddings_csv(in, path);

    if (m.rows() != expected_rows)
        fail(ErrorKind::InvalidArgument,
             "embedding row count " + std::to_string(m.rows()) + " does not match manifest size " +
                 std::to_string(expected_rows) + ": " + path);
    for (double v : m.values())
        if (!std::isfinite(v))
            fail(ErrorKind::CorruptData, "non-finite embedding value: " + path);

    if (pool && m.cols() % 49 == 0 && m.cols() > 49) {
        const std::size_t channels = m.cols() / 49;
        FeatureMatrix pooled(m.rows(), channels);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const auto v = global_average_pool(m.row(r), channels);
            std::copy(v.begin(), v.end(), pooled.row(r).begin());
        }
        return pooled;
    }
    return m;
}

void save_embeddings_binary(const FeatureMatrix& m, const std::string& path) {
    std::string buf;
    buf.reserve(12 + m.rows() * m.cols() * 4);
    buf.append("FEM1");
    const std::uint32_t dims[2] = {static_cast<std::uint32_t>(m.rows()),
                                   static_cast<std::uint32_t>(m.cols())};
    for (std::uint32_t d : dims)
        for (int i = 0; i < 4; ++i)
            buf.push_back(static_cast<char>((d >> (8 * i)) & 0xff));
    for (double v : m.values())
        append_f32le(buf, static_cast<float>(v));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorKind::Io, "cannot write embedding file: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out)
        fail(ErrorKind::Io, "write failed: " + path);
}

void save_embeddings_csv(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        fail(ErrorKind::Io, "cannot write embedding file: " + path);
    out << "dim=" << m.cols() << '\n';
    char buf[32];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            // %.9g round-trips 32-bit reals exactly.
            std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(row[c])));
            if (c)
                out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out)
        fail(ErrorKind::Io, "write failed: " + path);
}

Standardizer fit_standardizer(const FeatureMatrix& X) {
    require(!X.empty(), ErrorKind::InvalidArgument, "cannot fit standardizer on empty matrix");
    Standardizer s;
    s.mean.assign(X.cols(), 0.0);
    s.stdev.assign(X.cols(), 0.0);
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c)
            s.mean[c] += X.at(r, c);
    for (double& m : s.mean)
        m /= static_cast<double>(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) {
            const double d = X.at(r, c) - s.mean[c];
            s.stdev[c] += d * d;
        }
    for (double& v : s.stdev)
        v = std::sqrt(v / static_cast<double>(X.rows()));
    return s;
}

FeatureMatrix apply_standardizer(const Standardizer& s, const FeatureMatrix& X) {
    require(X.cols() == s.mean.size(), ErrorKind::InvalidArgument,
            "standardizer dimension mismatch");
    FeatureMatrix out(X.rows(), X.cols());
    for (std::size_t c = 0; c < X.cols(); ++c) {
        const double scale = s.stdev[c] < 1e-12 ? 0.0 : 1.0 / s.stdev[c];
        for (std::size_t r = 0; r < X.rows(); ++r)
            out.at(r, c) = (X.at(r, c) - s.mean[c]) * scale;
    }
    return out;
}

} // namespace cxrsev
