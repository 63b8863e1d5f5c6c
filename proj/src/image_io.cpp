#include "psl/image_io.hpp"

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include <jpeglib.h>
#include <openssl/evp.h>
#include <png.h>

namespace psl {

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

bool is_png(const std::vector<std::uint8_t>& b) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

bool is_jpeg(const std::vector<std::uint8_t>& b) { return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF; }

RasterImage from_rgb8(const std::uint8_t* px, int w, int h) {
    RasterImage img(w, h);
    auto& s = img.samples();
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = px[i];
    return img;
}

RasterImage decode_png(const std::vector<std::uint8_t>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw IoError(std::string("png decode: ") + image.message);
    image.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&image);
        throw IoError(std::string("png decode: ") + image.message);
    }
    return from_rgb8(buffer.data(), static_cast<int>(image.width), static_cast<int>(image.height));
}

struct JpegErrorManager {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

RasterImage decode_jpeg(const std::vector<std::uint8_t>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorManager err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    std::vector<std::uint8_t> pixels;
    int w = 0, h = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw IoError(std::string("jpeg decode: ") + err.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    w = static_cast<int>(cinfo.output_width);
    h = static_cast<int>(cinfo.output_height);
    pixels.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = pixels.data() + static_cast<std::size_t>(cinfo.output_scanline) * static_cast<std::size_t>(w) * 3;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return from_rgb8(pixels.data(), w, h);
}

std::vector<std::uint8_t> encode_png_raw(const std::uint8_t* px, int w, int h, bool gray) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(w);
    image.height = static_cast<png_uint_32>(h);
    image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, px, 0, nullptr))
        throw IoError(std::string("png encode: ") + image.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, px, 0, nullptr))
        throw IoError(std::string("png encode: ") + image.message);
    out.resize(size);
    return out;
}

}  // namespace

RasterImage decode_image(const std::vector<std::uint8_t>& bytes) {
    if (is_png(bytes)) return decode_png(bytes);
    if (is_jpeg(bytes)) return decode_jpeg(bytes);
    throw IoError("unsupported image format (expected PNG or JPEG)");
}

RasterImage read_image(const std::filesystem::path& path) {
    try {
        return decode_image(read_bytes(path));
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

BinaryMask read_mask(const std::filesystem::path& path) {
    const RasterImage img = read_image(path);
    BinaryMask mask(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            mask(x, y) = (img.at(x, y, 0) + img.at(x, y, 1) + img.at(x, y, 2)) / 3.0 > 127.0 ? 1 : 0;
    return mask;
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
    if (mask.empty()) throw IoError("png encode: empty mask");
    std::vector<std::uint8_t> px(mask.size());
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = mask.values()[i] ? 255 : 0;
    return encode_png_raw(px.data(), mask.width(), mask.height(), true);
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    write_bytes(path, encode_mask_png(mask));
}

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
    if (img.empty()) throw IoError("png encode: empty image");
    std::vector<std::uint8_t> px(img.samples().size());
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double v = std::round(img.samples()[i]);
        px[i] = static_cast<std::uint8_t>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
    }
    return encode_png_raw(px.data(), img.width(), img.height(), false);
}

void write_png(const std::filesystem::path& path, const RasterImage& img) { write_bytes(path, encode_png(img)); }

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    if (text.size() % 4 != 0) throw IoError("base64: length must be a multiple of 4");
    std::vector<std::uint8_t> out(3 * text.size() / 4);
    const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
    if (n < 0) throw IoError("base64: invalid input");
    std::size_t pad = 0;
    if (!text.empty() && text.back() == '=') ++pad;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

}  // namespace psl
