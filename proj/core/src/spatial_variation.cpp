#include "umbra/spatial_variation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "umbra/error.hpp"
#include "umbra/rng.hpp"
#include "umbra/scatter.hpp"

namespace umbra {

namespace {

ImageBuf noise_field_mapped(std::uint64_t field_seed, std::uint64_t spec_stream, int width,
                            int height, const SpatialVariationParams& params, double lo,
                            double hi, PerlinSpec& spec_out) {
    Rng rng(spec_stream);
    PerlinSpec spec;
    spec.seed = field_seed;
    spec.octaves = params.octaves;
    spec.persistence = rng.uniform(params.persistence_min, params.persistence_max);
    spec.initial_amplitude = 1.0;
    spec.base_frequency = params.base_frequency;
    spec_out = spec;

    const ShadowMask normalized = perlin_field(spec, width, height);
    ImageBuf out(width, height, 1);
    for (int y = 0; y < height; ++y) {
        const float* srow = normalized.row(y);
        float* drow = out.row(y);
        for (int x = 0; x < width; ++x)
            drow[x] = static_cast<float>(lo + (hi - lo) * srow[x * 3]);
    }
    return out;
}

}  // namespace

SpatialVariation spatial_variation_fields(std::uint64_t seed, int width, int height,
                                          const SpatialVariationParams& params) {
    if (params.sigma_min < 0.0 || params.sigma_max < params.sigma_min)
        throw DataError("spatial_variation: invalid sigma range");
    if (params.intensity_floor < 0.0 || params.intensity_floor > 1.0)
        throw DataError("spatial_variation: intensity floor outside [0,1]");

    SpatialVariation sv;
    sv.params = params;
    sv.blur_sigma = noise_field_mapped(derive_seed(seed, 0, "sv-blur"),
                                       derive_seed(seed, 1, "sv-blur"), width, height,
                                       params, params.sigma_min, params.sigma_max,
                                       sv.blur_spec);
    sv.intensity = noise_field_mapped(derive_seed(seed, 0, "sv-intensity"),
                                      derive_seed(seed, 1, "sv-intensity"), width, height,
                                      params, params.intensity_floor, 1.0,
                                      sv.intensity_spec);
    return sv;
}

std::vector<double> blur_stack_levels(double sigma_max) {
    if (!(sigma_max > 0.0)) return {0.0};
    std::vector<double> levels;
    double v = 0.0;
    while (v < sigma_max && v < 4.0) {
        levels.push_back(v);
        v += 0.5;
    }
    while (v < sigma_max) {
        levels.push_back(v);
        v += 1.0;
    }
    levels.push_back(sigma_max);
    return levels;
}

ShadowMask apply_spatial_variation(const ShadowMask& m_ss, const SpatialVariation& sv) {
    if (sv.blur_sigma.width() != m_ss.width() || sv.blur_sigma.height() != m_ss.height() ||
        !sv.blur_sigma.same_shape(sv.intensity))
        throw DataError("apply_spatial_variation: field dimensions do not match the mask");

    const std::vector<double> levels = blur_stack_levels(sv.params.sigma_max);
    // Levels are blurred lazily; constant sigma fields touch at most two.
    std::vector<std::optional<ImageBuf>> stack(levels.size());
    auto level_image = [&](std::size_t i) -> const ImageBuf& {
        if (!stack[i]) stack[i] = gaussian_blur(m_ss, levels[i]);
        return *stack[i];
    };

    ShadowMask out(m_ss.width(), m_ss.height(), m_ss.channels());
    const int ch = m_ss.channels();
    for (int y = 0; y < m_ss.height(); ++y) {
        const float* sigma_row = sv.blur_sigma.row(y);
        const float* gain_row = sv.intensity.row(y);
        float* drow = out.row(y);
        for (int x = 0; x < m_ss.width(); ++x) {
            const double sigma = std::clamp(static_cast<double>(sigma_row[x]),
                                            levels.front(), levels.back());
            const auto hi_it = std::lower_bound(levels.begin(), levels.end(), sigma);
            std::size_t hi = static_cast<std::size_t>(hi_it - levels.begin());
            const double gain = gain_row[x];
            if (levels[hi] == sigma) {
                const ImageBuf& img = level_image(hi);
                for (int c = 0; c < ch; ++c)
                    drow[x * ch + c] = std::clamp(
                        static_cast<float>(gain * img.at(y, x, c)), 0.0f, 1.0f);
                continue;
            }
            const std::size_t lo = hi - 1;
            const double t = (sigma - levels[lo]) / (levels[hi] - levels[lo]);
            const ImageBuf& a = level_image(lo);
            const ImageBuf& b = level_image(hi);
            for (int c = 0; c < ch; ++c) {
                const double v = (1.0 - t) * a.at(y, x, c) + t * b.at(y, x, c);
                drow[x * ch + c] = std::clamp(static_cast<float>(gain * v), 0.0f, 1.0f);
            }
        }
    }
    return out;
}

}  // namespace umbra
