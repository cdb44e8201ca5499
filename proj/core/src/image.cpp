#include "umbra/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umbra/error.hpp"

namespace umbra {

ImageBuf::ImageBuf(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1 || channels < 1) {
        throw DataError("ImageBuf: dimensions must be positive, got " +
                        std::to_string(width) + "x" + std::to_string(height) + "x" +
                        std::to_string(channels));
    }
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

bool ImageBuf::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](float v) { return std::isfinite(v); });
}

float ImageBuf::min_value() const {
    return *std::min_element(data_.begin(), data_.end());
}

float ImageBuf::max_value() const {
    return *std::max_element(data_.begin(), data_.end());
}

bool in_unit_range(const ImageBuf& img) {
    return std::all_of(img.data().begin(), img.data().end(),
                       [](float v) { return v >= 0.0f && v <= 1.0f; });
}

ImageBuf clamp01(ImageBuf img) {
    for (float& v : img.data()) v = std::clamp(v, 0.0f, 1.0f);
    return img;
}

double srgb_decode(double encoded) {
    if (encoded <= 0.04045) return encoded / 12.92;
    return std::pow((encoded + 0.055) / 1.055, 2.4);
}

double srgb_encode(double linear) {
    linear = std::clamp(linear, 0.0, 1.0);
    if (linear <= 0.0031308) return linear * 12.92;
    return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

ImageBuf srgb_to_linear(const ImageBuf& encoded) {
    if (!encoded.all_finite()) throw DataError("srgb_to_linear: non-finite sample");
    if (!in_unit_range(encoded))
        throw DataError("srgb_to_linear: encoded sample outside [0,1]");
    ImageBuf out = encoded;
    for (float& v : out.data()) v = static_cast<float>(srgb_decode(v));
    return out;
}

ImageBuf linear_to_srgb(const ImageBuf& linear) {
    if (!linear.all_finite()) throw DataError("linear_to_srgb: non-finite sample");
    ImageBuf out = linear;
    for (float& v : out.data()) v = static_cast<float>(srgb_encode(v));
    return out;
}

float sample_bilinear(const ImageBuf& img, double x, double y, int c) {
    const int w = img.width();
    const int h = img.height();
    x = std::clamp(x, 0.0, static_cast<double>(w - 1));
    y = std::clamp(y, 0.0, static_cast<double>(h - 1));
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = img.at(y0, x0, c) + fx * (img.at(y0, x1, c) - img.at(y0, x0, c));
    const double bot = img.at(y1, x0, c) + fx * (img.at(y1, x1, c) - img.at(y1, x0, c));
    return static_cast<float>(top + fy * (bot - top));
}

ImageBuf resize_crop_face(const ImageBuf& img, const FaceCrop& crop) {
    if (crop.w < 1 || crop.h < 1)
        throw DataError("resize_crop_face: crop box is degenerate (w=" +
                        std::to_string(crop.w) + ", h=" + std::to_string(crop.h) + ")");
    if (crop.x < 0)
        throw DataError("resize_crop_face: crop.x < 0");
    if (crop.y < 0)
        throw DataError("resize_crop_face: crop.y < 0");
    if (crop.x + crop.w > img.width())
        throw DataError("resize_crop_face: crop right edge " +
                        std::to_string(crop.x + crop.w) + " exceeds image width " +
                        std::to_string(img.width()));
    if (crop.y + crop.h > img.height())
        throw DataError("resize_crop_face: crop bottom edge " +
                        std::to_string(crop.y + crop.h) + " exceeds image height " +
                        std::to_string(img.height()));

    const int n = FaceCrop::kOutputSize;
    ImageBuf out(n, n, img.channels());
    // Endpoint-aligned sampling: output pixel 0 hits the box corner exactly
    // and output pixel n-1 hits the opposite corner.
    const double sx = crop.w > 1 ? static_cast<double>(crop.w - 1) / (n - 1) : 0.0;
    const double sy = crop.h > 1 ? static_cast<double>(crop.h - 1) / (n - 1) : 0.0;
    for (int oy = 0; oy < n; ++oy) {
        const double src_y = crop.y + oy * sy;
        for (int ox = 0; ox < n; ++ox) {
            const double src_x = crop.x + ox * sx;
            for (int c = 0; c < img.channels(); ++c) {
                out.at(oy, ox, c) = sample_bilinear(img, src_x, src_y, c);
            }
        }
    }
    return out;
}

}  // namespace umbra
