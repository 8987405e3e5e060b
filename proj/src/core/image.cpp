#include "core/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <png.h>

namespace cxrsev {

namespace {

int round_to_u8(double v) {
    int r = static_cast<int>(std::floor(v + 0.5));
    return std::clamp(r, 0, 255);
}

// Reads one whitespace-separated PGM header token, skipping '#' comments.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n')
                c = in.get();
        } else if (std::isspace(c)) {
            c = in.get();
        } else {
            break;
        }
    }
    while (c != EOF && !std::isspace(c)) {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    return token;
}

long parse_pgm_number(const std::string& token, const std::string& path, const char* what) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
        fail(ErrorKind::CorruptData, "corrupt PGM header (" + std::string(what) + "): " + path);
    return std::stol(token);
}

GrayImage load_pgm(std::istream& in, const std::string& path) {
    const long w = parse_pgm_number(next_pgm_token(in), path, "width");
    const long h = parse_pgm_number(next_pgm_token(in), path, "height");
    const long maxval = parse_pgm_number(next_pgm_token(in), path, "maxval");
    if (w < 1 || h < 1)
        fail(ErrorKind::CorruptData, "corrupt PGM header (bad dimensions): " + path);
    if (maxval > 255)
        fail(ErrorKind::UnsupportedFormat,
             "unsupported PGM format (maxval " + std::to_string(maxval) + " > 255): " + path);
    if (maxval < 1)
        fail(ErrorKind::CorruptData, "corrupt PGM header (maxval 0): " + path);
    // The token reader consumed exactly one whitespace byte after the maxval.
    GrayImage img(static_cast<int>(w), static_cast<int>(h));
    in.read(reinterpret_cast<char*>(img.data.data()),
            static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        fail(ErrorKind::CorruptData, "truncated PGM pixel data: " + path);
    return img;
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;

    ~PngReader() {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp)
            std::fclose(fp);
    }
};

GrayImage load_png(const std::string& path) {
    PngReader r;
    r.fp = std::fopen(path.c_str(), "rb");
    if (!r.fp)
        fail(ErrorKind::Io, "cannot open file: " + path);
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    r.info = r.png ? png_create_info_struct(r.png) : nullptr;
    if (!r.png || !r.info)
        fail(ErrorKind::Internal, "libpng initialization failed: " + path);

    if (setjmp(png_jmpbuf(r.png)))
        fail(ErrorKind::CorruptData, "corrupt PNG data: " + path);

    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    const int bit_depth = png_get_bit_depth(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);
    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));

    if (bit_depth != 8 || (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB))
        fail(ErrorKind::UnsupportedFormat,
             "unsupported PNG format (only 8-bit grayscale or RGB): " + path);

    png_set_interlace_handling(r.png);
    png_read_update_info(r.png, r.info);

    const std::size_t row_bytes = png_get_rowbytes(r.png, r.info);
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(height) * row_bytes);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y)
        rows[static_cast<std::size_t>(y)] = raw.data() + static_cast<std::size_t>(y) * row_bytes;
    png_read_image(r.png, rows.data());

    GrayImage img(width, height);
    if (color_type == PNG_COLOR_TYPE_GRAY) {
        for (int y = 0; y < height; ++y)
            std::copy_n(rows[static_cast<std::size_t>(y)], width, img.data.begin() + static_cast<std::size_t>(y) * width);
    } else {
        for (int y = 0; y < height; ++y) {
            const png_bytep row = rows[static_cast<std::size_t>(y)];
            for (int x = 0; x < width; ++x) {
                const double lum = 0.299 * row[3 * x] + 0.587 * row[3 * x + 1] + 0.114 * row[3 * x + 2];
                img.at(x, y) = static_cast<std::uint8_t>(static_cast<int>(std::floor(lum + 0.5)));
            }
        }
    }
    return img;
}

} // namespace

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (!std::filesystem::exists(path))
            fail(ErrorKind::NotFound, "file not found: " + path);
        fail(ErrorKind::Io, "cannot open file: " + path);
    }
    unsigned char magic[8] = {};
    in.read(reinterpret_cast<char*>(magic), 8);
    const std::streamsize got = in.gcount();
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (got >= 8 && std::equal(png_sig, png_sig + 8, magic)) {
        in.close();
        return load_png(path);
    }
    if (got >= 2 && magic[0] == 'P' && magic[1] == '5') {
        in.clear();
        in.seekg(2);
        return load_pgm(in, path);
    }
    fail(ErrorKind::UnsupportedFormat, "unsupported image format: " + path);
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorKind::Io, "cannot write file: " + path);
    out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    out.flush();
    if (!out)
        fail(ErrorKind::Io, "write failed: " + path);
}

GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
    require(out_w >= 1 && out_h >= 1, ErrorKind::InvalidArgument,
            "resize target dimensions must be >= 1");
    GrayImage out(out_w, out_h);
    const double scale_x = static_cast<double>(img.width) / out_w;
    const double scale_y = static_cast<double>(img.height) / out_h;
    for (int dy = 0; dy < out_h; ++dy) {
        double sy = (dy + 0.5) * scale_y - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(img.height - 1));
        const int y0 = static_cast<int>(sy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double fy = sy - y0;
        for (int dx = 0; dx < out_w; ++dx) {
            double sx = (dx + 0.5) * scale_x - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(img.width - 1));
            const int x0 = static_cast<int>(sx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double fx = sx - x0;
            const double top = (1.0 - fx) * img.at(x0, y0) + fx * img.at(x1, y0);
            const double bottom = (1.0 - fx) * img.at(x0, y1) + fx * img.at(x1, y1);
            out.at(dx, dy) = static_cast<std::uint8_t>(round_to_u8((1.0 - fy) * top + fy * bottom));
        }
    }
    return out;
}

std::vector<double> to_unit_reals(const GrayImage& img) {
    std::vector<double> out(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i)
        out[i] = img.data[i] / 255.0;
    return out;
}

} // namespace cxrsev
