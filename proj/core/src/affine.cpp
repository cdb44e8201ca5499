#include "umbra/affine.hpp"

#include "umbra/error.hpp"

namespace umbra {

ImageBuf apply_affine(const ImageBuf& input, const AffineOutput& out) {
    if (!input.same_shape(out.scale) || !input.same_shape(out.offset))
        throw DataError("apply_affine: scale/offset shape does not match input");
    ImageBuf result(input.width(), input.height(), input.channels());
    const float* in = input.data().data();
    const float* a = out.scale.data().data();
    const float* b = out.offset.data().data();
    float* r = result.data().data();
    const std::size_t n = input.sample_count();
    for (std::size_t i = 0; i < n; ++i) r[i] = in[i] * a[i] + b[i];
    return result;
}

}  // namespace umbra
