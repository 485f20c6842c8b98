/**
 * @file image_io.cpp
 * @brief PNG (libpng simplified API) and PGM P5 codecs
 */
#include "cxraug/image_io.hpp"
#include "cxraug/error.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace cxraug {

namespace fs = std::filesystem;

namespace {

constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::vector<unsigned char> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open image '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(const std::vector<unsigned char>& data, std::size_t& pos) {
    while (pos < data.size()) {
        if (data[pos] == '#') {
            while (pos < data.size() && data[pos] != '\n') ++pos;
        } else if (std::isspace(data[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    std::string token;
    while (pos < data.size() && !std::isspace(data[pos]) && data[pos] != '#') {
        token.push_back(static_cast<char>(data[pos++]));
    }
    return token;
}

int pgm_int(const std::vector<unsigned char>& data, std::size_t& pos, const fs::path& path) {
    const std::string token = pgm_token(data, pos);
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(c); }) ||
        token.size() > 9) {
        throw DataError("malformed PGM header in '" + path.string() + "'");
    }
    return std::stoi(token);
}

GrayImage decode_pgm(const std::vector<unsigned char>& data, const fs::path& path) {
    std::size_t pos = 2;
    const int width = pgm_int(data, pos, path);
    const int height = pgm_int(data, pos, path);
    const int maxval = pgm_int(data, pos, path);
    if (maxval > 255) {
        throw DataError("unsupported PGM bit depth in '" + path.string() + "': maxval " +
                        std::to_string(maxval) + " (only 8-bit, maxval 255, is supported)");
    }
    if (maxval != 255) {
        throw DataError("unsupported PGM maxval " + std::to_string(maxval) + " in '" + path.string() +
                        "' (expected 255)");
    }
    if (width < 1 || height < 1) {
        throw DataError("PGM '" + path.string() + "' has empty dimensions");
    }
    ++pos;  // single whitespace byte after maxval
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pos > data.size() || data.size() - pos < count) {
        throw DataError("truncated PGM raster in '" + path.string() + "'");
    }
    return GrayImage(width, height, std::vector<std::uint8_t>(data.begin() + pos, data.begin() + pos + count));
}

GrayImage decode_png(const std::vector<unsigned char>& data, const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, data.data(), data.size())) {
        throw DataError("cannot decode PNG '" + path.string() + "': " + image.message);
    }
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw DataError("unsupported PNG bit depth in '" + path.string() + "': 16-bit (only 8-bit is supported)");
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
    const int channels = (color ? 3 : 1) + (alpha ? 1 : 0);
    image.format = color ? (alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB) : (alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY);

    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw DataError("cannot decode PNG '" + path.string() + "': " + msg);
    }

    std::vector<std::uint8_t> gray(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (std::size_t i = 0; i < gray.size(); ++i) {
        const std::uint8_t* px = raw.data() + i * channels;
        gray[i] = color ? luma(px[0], px[1], px[2]) : px[0];
    }
    return GrayImage(width, height, std::move(gray));
}

bool has_png_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png";
}

}  // namespace

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

GrayImage load_image(const fs::path& path) {
    if (!fs::exists(path)) {
        throw DataError("image file not found: '" + path.string() + "'");
    }
    const std::vector<unsigned char> data = read_file(path);
    if (data.size() >= kPngSignature.size() && std::equal(kPngSignature.begin(), kPngSignature.end(), data.begin())) {
        return decode_png(data, path);
    }
    if (data.size() >= 2 && data[0] == 'P' && data[1] == '5') {
        return decode_pgm(data, path);
    }
    throw DataError("unsupported image format in '" + path.string() + "' (expected PNG or binary PGM P5)");
}

void save_image(const GrayImage& img, const fs::path& path) {
    if (has_png_extension(path)) {
        png_image image;
        std::memset(&image, 0, sizeof image);
        image.version = PNG_IMAGE_VERSION;
        image.width = static_cast<png_uint_32>(img.width());
        image.height = static_cast<png_uint_32>(img.height());
        image.format = PNG_FORMAT_GRAY;
        if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels().data(), 0, nullptr)) {
            const std::string msg = image.message;
            png_image_free(&image);
            throw DataError("cannot write PNG '" + path.string() + "': " + msg);
        }
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot open '" + path.string() + "' for writing");
    }
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
    if (!out) {
        throw DataError("failed writing '" + path.string() + "'");
    }
}

}  // namespace cxraug
