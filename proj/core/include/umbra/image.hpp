#pragma once

#include <cstddef>
#include <vector>

namespace umbra {

/// Row-major interleaved float image. Pixel values live in linear light
/// unless a function says otherwise; synthesis stages may carry headroom
/// above 1.0, and values are only clamped when encoding for output.
class ImageBuf {
public:
    ImageBuf() = default;
    ImageBuf(int width, int height, int channels, float fill = 0.0f);

    static ImageBuf constant(int width, int height, int channels, float value) {
        return ImageBuf(width, height, channels, value);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }
    std::size_t sample_count() const { return data_.size(); }

    float& at(int y, int x, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    float at(int y, int x, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    float* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_ * channels_; }
    const float* row(int y) const {
        return data_.data() + static_cast<std::size_t>(y) * width_ * channels_;
    }

    std::vector<float>& data() { return data_; }
    const std::vector<float>& data() const { return data_; }

    bool same_shape(const ImageBuf& other) const {
        return width_ == other.width_ && height_ == other.height_ &&
               channels_ == other.channels_;
    }

    bool all_finite() const;
    float min_value() const;
    float max_value() const;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

/// Per-pixel, per-channel blend field in [0,1]; 1 = fully shadowed.
/// Same storage as ImageBuf; validity is checked with in_unit_range().
using ShadowMask = ImageBuf;

bool in_unit_range(const ImageBuf& img);

/// Clamp every sample to [0,1].
ImageBuf clamp01(ImageBuf img);

/// IEC 61966-2-1 transfer function, scalar form. Inputs outside [0,1] are
/// clamped by the encode; the decode expects [0,1].
double srgb_decode(double encoded);
double srgb_encode(double linear);

/// Decode an sRGB-encoded image to linear light. Throws DataError on
/// non-finite samples or samples outside [0,1].
ImageBuf srgb_to_linear(const ImageBuf& encoded);

/// Encode a linear-light image to sRGB, clamping to [0,1] first.
/// Throws DataError on non-finite samples.
ImageBuf linear_to_srgb(const ImageBuf& linear);

/// Source bounding box resampled to a fixed 256x256 face crop.
struct FaceCrop {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
    static constexpr int kOutputSize = 256;
};

/// Bilinear resample of the crop box to 256x256. Endpoint-aligned: output
/// corners sample the exact corner pixels of the box, so a 256x256 box is
/// copied verbatim. Throws DataError if the box leaves the image.
ImageBuf resize_crop_face(const ImageBuf& img, const FaceCrop& crop);

/// Bilinear sample at (x, y) in pixel coordinates with edge clamping.
/// Integer coordinates address pixel centers.
float sample_bilinear(const ImageBuf& img, double x, double y, int c);

}  // namespace umbra
