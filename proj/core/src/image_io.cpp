#include "umbra/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "umbra/error.hpp"

namespace umbra {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_fn(png_structp png, png_const_charp msg) {
    (void)png;
    throw DataError(std::string("png: ") + msg);
}

void png_warn_fn(png_structp, png_const_charp) {}

}  // namespace

ImageBuf load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw DataError("load_png: cannot open " + path.string());

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw DataError("load_png: not a PNG file: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             png_error_fn, png_warn_fn);
    if (!png) throw DataError("load_png: png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("load_png: png_create_info_struct failed");
    }

    try {
        png_init_io(png, fp.get());
        png_set_sig_bytes(png, 8);
        png_read_info(png, info);

        const png_uint_32 width = png_get_image_width(png, info);
        const png_uint_32 height = png_get_image_height(png, info);
        const int bit_depth = png_get_bit_depth(png, info);
        const int color_type = png_get_color_type(png, info);

        if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
            png_set_expand_gray_1_2_4_to_8(png);
        if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(png);
        png_set_strip_alpha(png);
        if (bit_depth == 16) png_set_swap(png);  // PNG stores 16-bit big-endian

        png_read_update_info(png, info);
        const int out_depth = png_get_bit_depth(png, info);

        ImageBuf img(static_cast<int>(width), static_cast<int>(height), 3);
        std::vector<png_byte> rowbuf(png_get_rowbytes(png, info));
        const float scale = out_depth == 16 ? 1.0f / 65535.0f : 1.0f / 255.0f;
        for (png_uint_32 y = 0; y < height; ++y) {
            png_read_row(png, rowbuf.data(), nullptr);
            float* dst = img.row(static_cast<int>(y));
            if (out_depth == 16) {
                const auto* src = reinterpret_cast<const std::uint16_t*>(rowbuf.data());
                for (std::size_t i = 0; i < width * 3; ++i) dst[i] = src[i] * scale;
            } else {
                for (std::size_t i = 0; i < width * 3; ++i) dst[i] = rowbuf[i] * scale;
            }
        }
        png_read_end(png, nullptr);
        png_destroy_read_struct(&png, &info, nullptr);
        return img;
    } catch (...) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw;
    }
}

namespace {

void save_png_impl(const std::filesystem::path& path, const ImageBuf& encoded,
                   int bit_depth) {
    if (encoded.channels() != 3)
        throw DataError("save_png: expected 3 channels, got " +
                        std::to_string(encoded.channels()));
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw DataError("save_png: cannot open " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              png_error_fn, png_warn_fn);
    if (!png) throw DataError("save_png: png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("save_png: png_create_info_struct failed");
    }

    try {
        png_init_io(png, fp.get());
        png_set_IHDR(png, info, encoded.width(), encoded.height(), bit_depth,
                     PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                     PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        if (bit_depth == 16) png_set_swap(png);

        const int w = encoded.width();
        const double peak = bit_depth == 16 ? 65535.0 : 255.0;
        std::vector<std::uint16_t> row16(static_cast<std::size_t>(w) * 3);
        std::vector<std::uint8_t> row8(static_cast<std::size_t>(w) * 3);
        for (int y = 0; y < encoded.height(); ++y) {
            const float* src = encoded.row(y);
            if (bit_depth == 16) {
                for (int i = 0; i < w * 3; ++i) {
                    const double v = std::clamp(static_cast<double>(src[i]), 0.0, 1.0);
                    row16[i] = static_cast<std::uint16_t>(std::lround(v * peak));
                }
                png_write_row(png, reinterpret_cast<png_bytep>(row16.data()));
            } else {
                for (int i = 0; i < w * 3; ++i) {
                    const double v = std::clamp(static_cast<double>(src[i]), 0.0, 1.0);
                    row8[i] = static_cast<std::uint8_t>(std::lround(v * peak));
                }
                png_write_row(png, row8.data());
            }
        }
        png_write_end(png, nullptr);
        png_destroy_write_struct(&png, &info);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
}

}  // namespace

void save_png8(const std::filesystem::path& path, const ImageBuf& encoded) {
    save_png_impl(path, encoded, 8);
}

void save_png16(const std::filesystem::path& path, const ImageBuf& encoded) {
    save_png_impl(path, encoded, 16);
}

ImageBuf load_pfm(const std::filesystem::path& path) {
    static_assert(std::endian::native == std::endian::little,
                  "PFM reader assumes a little-endian host");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_pfm: cannot open " + path.string());

    std::string magic;
    int width = 0, height = 0;
    double scale = 0.0;
    in >> magic >> width >> height >> scale;
    if (!in || (magic != "PF" && magic != "Pf"))
        throw DataError("load_pfm: malformed header in " + path.string());
    if (width < 1 || height < 1)
        throw DataError("load_pfm: bad dimensions in " + path.string());
    if (scale >= 0.0)
        throw DataError("load_pfm: big-endian PFM not supported: " + path.string());
    in.get();  // single whitespace byte after the scale line

    const int channels = magic == "PF" ? 3 : 1;
    ImageBuf img(width, height, channels);
    const std::streamsize row_bytes =
        static_cast<std::streamsize>(width) * channels * sizeof(float);
    // PFM scanlines are stored bottom-up.
    for (int y = height - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(img.row(y)), row_bytes);
        if (!in) throw DataError("load_pfm: truncated data in " + path.string());
    }
    return img;
}

void save_pfm(const std::filesystem::path& path, const ImageBuf& img) {
    static_assert(std::endian::native == std::endian::little,
                  "PFM writer assumes a little-endian host");
    if (img.channels() != 1 && img.channels() != 3)
        throw DataError("save_pfm: expected 1 or 3 channels, got " +
                        std::to_string(img.channels()));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_pfm: cannot open " + path.string());

    out << (img.channels() == 3 ? "PF" : "Pf") << "\n"
        << img.width() << " " << img.height() << "\n"
        << "-1.0\n";
    const std::streamsize row_bytes =
        static_cast<std::streamsize>(img.width()) * img.channels() * sizeof(float);
    for (int y = img.height() - 1; y >= 0; --y) {
        out.write(reinterpret_cast<const char*>(img.row(y)), row_bytes);
    }
    if (!out) throw DataError("save_pfm: write failed for " + path.string());
}

FaceCrop load_crop_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_crop_json: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
        FaceCrop crop;
        crop.x = doc.at("x").get<int>();
        crop.y = doc.at("y").get<int>();
        crop.w = doc.at("w").get<int>();
        crop.h = doc.at("h").get<int>();
        return crop;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_crop_json: " + path.string() + ": " + e.what());
    }
}

void save_crop_json(const std::filesystem::path& path, const FaceCrop& crop) {
    nlohmann::json doc{{"x", crop.x}, {"y", crop.y}, {"w", crop.w}, {"h", crop.h}};
    std::ofstream out(path);
    if (!out) throw DataError("save_crop_json: cannot open " + path.string());
    out << doc.dump() << "\n";
}

}  // namespace umbra
