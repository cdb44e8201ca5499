#include "umbra/color_jitter.hpp"

#include <algorithm>
#include <cmath>

#include "umbra/error.hpp"
#include "umbra/rng.hpp"

namespace umbra {

Mat3 mat3_identity() {
    return {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

Mat3 mat3_scale(double s) {
    return {{{s, 0.0, 0.0}, {0.0, s, 0.0}, {0.0, 0.0, s}}};
}

std::array<double, 3> white_response(const Mat3& m) {
    return {m[0][0] + m[0][1] + m[0][2], m[1][0] + m[1][1] + m[1][2],
            m[2][0] + m[2][1] + m[2][2]};
}

double luminance709(double r, double g, double b) {
    return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

ColorJitter sample_ccm(std::uint64_t seed, const ColorJitterParams& params) {
    Rng rng(seed);
    for (;;) {
        const double dr = rng.uniform(params.red_gain_min, params.red_gain_max);
        const double dg =
            rng.uniform(dr, std::min(params.green_gain_cap, dr + params.gain_step_max));
        const double db =
            rng.uniform(dg, std::min(params.blue_gain_cap, dg + params.gain_step_max));
        const double d[3] = {dr, dg, db};

        Mat3 ccm;
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                const double e = rng.uniform(-params.offdiag_range, params.offdiag_range);
                ccm[r][c] = d[r] * ((r == c ? 1.0 : 0.0) + e);
            }
        }

        const auto white = white_response(ccm);
        if (white[2] < white[0]) continue;  // shadows skew blue, never red
        if (luminance709(white[0], white[1], white[2]) > 1.0) continue;
        return ColorJitter{ccm};
    }
}

ImageBuf apply_ccm(const ImageBuf& lit, const ColorJitter& jitter) {
    if (lit.channels() != 3)
        throw DataError("apply_ccm: expected 3 channels");
    const Mat3& m = jitter.ccm;
    ImageBuf out(lit.width(), lit.height(), 3);
    const float* src = lit.data().data();
    float* dst = out.data().data();
    const std::size_t pixels = static_cast<std::size_t>(lit.width()) * lit.height();
    for (std::size_t i = 0; i < pixels; ++i, src += 3, dst += 3) {
        const double r = src[0], g = src[1], b = src[2];
        dst[0] = static_cast<float>(
            std::clamp(m[0][0] * r + m[0][1] * g + m[0][2] * b, 0.0, 1.0));
        dst[1] = static_cast<float>(
            std::clamp(m[1][0] * r + m[1][1] * g + m[1][2] * b, 0.0, 1.0));
        dst[2] = static_cast<float>(
            std::clamp(m[2][0] * r + m[2][1] * g + m[2][2] * b, 0.0, 1.0));
    }
    return out;
}

}  // namespace umbra
