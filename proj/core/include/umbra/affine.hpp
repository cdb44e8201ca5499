#pragma once

#include "umbra/image.hpp"

namespace umbra {

/// Per-pixel, per-channel scale and offset: I_out = I_in * A + B.
/// This is the output convention of the enhancement networks; the toolkit
/// applies stored A/B maps to inputs during evaluation.
struct AffineOutput {
    ImageBuf scale;   // A
    ImageBuf offset;  // B
};

ImageBuf apply_affine(const ImageBuf& input, const AffineOutput& out);

}  // namespace umbra
