#pragma once

#include <array>
#include <cstdint>

#include "umbra/image.hpp"

namespace umbra {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 mat3_identity();
Mat3 mat3_scale(double s);

/// 3x3 color correction matrix applied to linear RGB; models the
/// illumination shift inside shadow regions.
struct ColorJitter {
    Mat3 ccm = mat3_identity();
};

struct ColorJitterParams {
    double red_gain_min = 0.30;
    double red_gain_max = 0.65;
    double gain_step_max = 0.20;  // green over red, blue over green
    double green_gain_cap = 0.75;
    double blue_gain_cap = 0.85;
    double offdiag_range = 0.05;  // entries of E ~ U[-range, range]
};

/// Sample ccm = D * (I + E): a diagonal gain D with blue >= green >= red
/// (shadows skew blue) darkened below unit luminance, perturbed by a small
/// dense E. Rejection keeps the blue-over-red gain and the luminance bound
/// exact for every draw. Deterministic in seed.
ColorJitter sample_ccm(std::uint64_t seed, const ColorJitterParams& params = {});

/// Row sums of the matrix, i.e. its response to white (1,1,1).
std::array<double, 3> white_response(const Mat3& m);

/// Rec. 709 luminance of a linear RGB triple.
double luminance709(double r, double g, double b);

/// Per-pixel matrix multiply, clamped to [0,1].
ImageBuf apply_ccm(const ImageBuf& lit, const ColorJitter& jitter);

}  // namespace umbra
