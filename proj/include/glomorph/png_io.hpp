#pragma once

#include <cstdint>
#include <filesystem>

#include "glomorph/image.hpp"

namespace glomorph {

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    bool operator==(const Rgb8&) const = default;
};

using RgbImage = Image<Rgb8>;

/// Reads an 8-bit single-channel PNG (grayscale or palette); pixel values are
/// the raw sample/palette indices. Throws MissingFileError / Error.
LabelImage read_label_png(const std::filesystem::path& file);

/// Writes a label mask as an 8-bit palette PNG with one palette entry per
/// ultrastructure class, so masks double as a quick visual check.
void write_label_png(const std::filesystem::path& file, const LabelImage& img);

/// 16-bit single-channel PNG; values are the raw 0..65535 samples.
Image<std::uint16_t> read_gray16_png(const std::filesystem::path& file);
void write_gray16_png(const std::filesystem::path& file, const Image<std::uint16_t>& img);

RgbImage read_rgb8_png(const std::filesystem::path& file);
void write_rgb8_png(const std::filesystem::path& file, const RgbImage& img);

}  // namespace glomorph
