#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "psl/image.hpp"

namespace psl {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes PNG or JPEG (sniffed from the signature) into 8-bit sRGB samples.
RasterImage read_image(const std::filesystem::path& path);
RasterImage decode_image(const std::vector<std::uint8_t>& bytes);

/// Reads a mask image; any channel mean > 127 counts as foreground.
BinaryMask read_mask(const std::filesystem::path& path);

/// Single-channel 0/255 PNG.
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

/// 8-bit RGB PNG; samples are rounded and clamped.
std::vector<std::uint8_t> encode_png(const RasterImage& img);
void write_png(const std::filesystem::path& path, const RasterImage& img);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace psl
