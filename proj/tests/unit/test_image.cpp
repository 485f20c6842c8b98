/**
 * @file test_image.cpp
 * @brief GrayImage invariants and PNG/PGM I/O
 */
#include "cxraug/error.hpp"
#include "cxraug/image.hpp"
#include "cxraug/image_io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <png.h>

#include <cstring>
#include <fstream>

namespace cxraug {
namespace {

using testing::ScratchDir;

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
}

// Writes a PNG in an arbitrary libpng format, bypassing save_image.
void write_png(const std::filesystem::path& path, int w, int h, png_uint_32 format, const std::vector<std::uint8_t>& data) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(w);
    image.height = static_cast<png_uint_32>(h);
    image.format = format;
    ASSERT_TRUE(png_image_write_to_file(&image, path.c_str(), 0, data.data(), 0, nullptr)) << image.message;
}

TEST(GrayImageTest, RejectsBadDimensions) {
    EXPECT_THROW(GrayImage(0, 3, std::vector<std::uint8_t>{}), InvalidArgument);
    EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>{1, 2, 3}), InvalidArgument);
}

TEST(GrayImageTest, ClampedAccessReplicatesEdges) {
    const GrayImage img(2, 2, std::vector<std::uint8_t>{1, 2, 3, 4});
    EXPECT_EQ(img.at_clamped(-5, 0), 1);
    EXPECT_EQ(img.at_clamped(7, 1), 4);
    EXPECT_EQ(img.at_clamped(1, -1), 2);
}

TEST(LabelTest, ClosedVocabulary) {
    EXPECT_EQ(parse_label("covid"), Label::covid);
    EXPECT_EQ(parse_label("normal"), Label::normal);
    EXPECT_THROW(parse_label("Covid"), InvalidArgument);
}

TEST(LumaTest, Rec601RoundHalfUp) {
    EXPECT_EQ(luma(255, 0, 0), 76);  // 76.245
    EXPECT_EQ(luma(0, 255, 0), 150);  // 149.685
    EXPECT_EQ(luma(0, 0, 255), 29);   // 29.07
    EXPECT_EQ(luma(255, 255, 255), 255);
    EXPECT_EQ(luma(0, 0, 0), 0);
}

TEST(ImageIoTest, MinimalPgm) {
    ScratchDir dir("io");
    write_bytes(dir / "one.pgm", std::string("P5\n1 1\n255\n") + '\0');
    const GrayImage img = load_image(dir / "one.pgm");
    EXPECT_EQ(img, GrayImage(1, 1, std::vector<std::uint8_t>{0}));
}

TEST(ImageIoTest, PgmHeaderComments) {
    ScratchDir dir("io");
    write_bytes(dir / "c.pgm", "P5\n# made by hand\n2 1 # trailing\n255\n\x07\x09");
    EXPECT_EQ(load_image(dir / "c.pgm"), GrayImage(2, 1, std::vector<std::uint8_t>{7, 9}));
}

TEST(ImageIoTest, RoundTripBothFormats) {
    ScratchDir dir("io");
    const GrayImage img(2, 2, std::vector<std::uint8_t>{0, 85, 170, 255});
    for (const char* name : {"a.png", "a.pgm", "A.PNG"}) {
        save_image(img, dir / name);
        EXPECT_EQ(load_image(dir / name), img) << name;
    }
}

TEST(ImageIoTest, OverwriteReplacesContent) {
    ScratchDir dir("io");
    save_image(GrayImage(3, 3, std::uint8_t{10}), dir / "x.png");
    const GrayImage second(2, 1, std::vector<std::uint8_t>{4, 5});
    save_image(second, dir / "x.png");
    EXPECT_EQ(load_image(dir / "x.png"), second);
}

TEST(ImageIoTest, LargeZeroImageKeepsDimensions) {
    ScratchDir dir("io");
    save_image(GrayImage(224, 224, std::uint8_t{0}), dir / "z.png");
    const GrayImage back = load_image(dir / "z.png");
    EXPECT_EQ(back.width(), 224);
    EXPECT_EQ(back.height(), 224);
}

TEST(ImageIoTest, RandomImagesRoundTrip) {
    ScratchDir dir("io");
    std::mt19937_64 gen(7);
    for (int i = 0; i < 20; ++i) {
        const int w = 1 + static_cast<int>(gen() % 40);
        const int h = 1 + static_cast<int>(gen() % 40);
        const GrayImage img = testing::random_image(w, h, gen);
        save_image(img, dir / "r.png");
        save_image(img, dir / "r.pgm");
        ASSERT_EQ(load_image(dir / "r.png"), img);
        ASSERT_EQ(load_image(dir / "r.pgm"), img);
    }
}

TEST(ImageIoTest, RgbPngConvertsToLuma) {
    ScratchDir dir("io");
    write_png(dir / "rgb.png", 2, 1, PNG_FORMAT_RGB, {255, 0, 0, 10, 20, 30});
    const GrayImage img = load_image(dir / "rgb.png");
    EXPECT_EQ(img.at(0, 0), 76);
    EXPECT_EQ(img.at(1, 0), luma(10, 20, 30));
}

TEST(ImageIoTest, Rejects16BitPng) {
    ScratchDir dir("io");
    std::vector<std::uint8_t> raw(4 * sizeof(png_uint_16), 0);
    write_png(dir / "deep.png", 2, 2, PNG_FORMAT_LINEAR_Y, raw);
    try {
        load_image(dir / "deep.png");
        FAIL() << "expected rejection";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("16-bit"), std::string::npos);
    }
}

TEST(ImageIoTest, Rejects16BitPgm) {
    ScratchDir dir("io");
    write_bytes(dir / "deep.pgm", std::string("P5\n1 1\n65535\n") + std::string(2, '\0'));
    EXPECT_THROW(load_image(dir / "deep.pgm"), DataError);
}

TEST(ImageIoTest, MissingAndUnknownFiles) {
    ScratchDir dir("io");
    EXPECT_THROW(load_image(dir / "nope.png"), DataError);
    write_bytes(dir / "text.png", "hello world");
    EXPECT_THROW(load_image(dir / "text.png"), DataError);
    write_bytes(dir / "short.pgm", "P5\n4 4\n255\nab");
    EXPECT_THROW(load_image(dir / "short.pgm"), DataError);
}

TEST(ImageIoTest, UnwritablePath) {
    ScratchDir dir("io");
    EXPECT_THROW(save_image(GrayImage(1, 1), dir / "missing" / "x.pgm"), DataError);
    EXPECT_THROW(save_image(GrayImage(1, 1), dir / "missing" / "x.png"), DataError);
}

}  // namespace
}  // namespace cxraug
