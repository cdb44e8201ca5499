#pragma once

#include <cstdint>

#include "umbra/image.hpp"
#include "umbra/perlin.hpp"

namespace umbra {

struct SpatialVariationParams {
    int octaves = 2;
    double persistence_min = 0.05;
    double persistence_max = 0.25;
    double base_frequency = 4.0;
    double sigma_min = 0.0;
    double sigma_max = 8.0;      // pixels at 256x256
    double intensity_floor = 0.4;  // shadows never fully vanish
};

/// Per-pixel blur width and shadow intensity, both driven by low-octave
/// noise fields drawn from independent substreams.
struct SpatialVariation {
    ImageBuf blur_sigma;  // 1 channel, values in [sigma_min, sigma_max]
    ImageBuf intensity;   // 1 channel, values in [intensity_floor, 1]
    PerlinSpec blur_spec;
    PerlinSpec intensity_spec;
    SpatialVariationParams params;
};

/// Draw the two noise fields from the "sv-blur" and "sv-intensity"
/// substreams of `seed` and map them affinely onto their target ranges.
SpatialVariation spatial_variation_fields(std::uint64_t seed, int width, int height,
                                          const SpatialVariationParams& params = {});

/// Apply the per-pixel blur (a scale stack of globally blurred copies,
/// linearly interpolated in sigma) followed by the per-pixel intensity
/// multiply. Sigma values that hit a stack level reproduce the global blur
/// at that sigma; the stack holds half-pixel steps up to 4 and whole-pixel
/// steps beyond. Output stays in [0,1].
ShadowMask apply_spatial_variation(const ShadowMask& m_ss, const SpatialVariation& sv);

/// Stack levels used by apply_spatial_variation: 0 to min(4, sigma_max) in
/// half-pixel steps, then whole pixels up to sigma_max inclusive.
std::vector<double> blur_stack_levels(double sigma_max);

}  // namespace umbra
