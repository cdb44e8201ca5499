#include "umbra/perlin.hpp"

#include <cmath>
#include <string>

#include "umbra/error.hpp"
#include "umbra/rng.hpp"

namespace umbra {

namespace {

// Eight unit-length gradient directions, the classic 2D set.
constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kGradX[8] = {1.0, -1.0, 0.0, 0.0, kInvSqrt2, -kInvSqrt2, kInvSqrt2, -kInvSqrt2};
constexpr double kGradY[8] = {0.0, 0.0, 1.0, -1.0, kInvSqrt2, kInvSqrt2, -kInvSqrt2, -kInvSqrt2};

inline int gradient_index(std::uint64_t seed, std::int64_t ix, std::int64_t iy) {
    std::uint64_t h = mix64(seed ^ (static_cast<std::uint64_t>(ix) * 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ (static_cast<std::uint64_t>(iy) * 0xc2b2ae3d27d4eb4fULL));
    return static_cast<int>(h & 7);
}

inline double corner(std::uint64_t seed, std::int64_t ix, std::int64_t iy, double dx,
                     double dy) {
    const int g = gradient_index(seed, ix, iy);
    return kGradX[g] * dx + kGradY[g] * dy;
}

// Quintic fade, C2-continuous across cell boundaries.
inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

inline double lerp(double a, double b, double t) { return a + t * (b - a); }

void validate_spec(const PerlinSpec& spec) {
    if (spec.octaves < 1)
        throw DataError("perlin: octaves must be >= 1, got " + std::to_string(spec.octaves));
    if (!(spec.persistence >= 0.0 && spec.persistence <= 1.0))
        throw DataError("perlin: persistence must be in [0,1], got " +
                        std::to_string(spec.persistence));
    if (!std::isfinite(spec.base_frequency) || spec.base_frequency <= 0.0)
        throw DataError("perlin: base_frequency must be positive");
}

}  // namespace

double perlin_noise2(std::uint64_t seed, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const double dx = x - fx;
    const double dy = y - fy;

    const double n00 = corner(seed, ix, iy, dx, dy);
    const double n10 = corner(seed, ix + 1, iy, dx - 1.0, dy);
    const double n01 = corner(seed, ix, iy + 1, dx, dy - 1.0);
    const double n11 = corner(seed, ix + 1, iy + 1, dx - 1.0, dy - 1.0);

    const double u = fade(dx);
    const double v = fade(dy);
    return lerp(lerp(n00, n10, u), lerp(n01, n11, u), v);
}

std::vector<double> octave_amplitudes(const PerlinSpec& spec) {
    std::vector<double> amps(spec.octaves);
    for (int k = 0; k < spec.octaves; ++k) {
        amps[k] = spec.initial_amplitude * std::pow(spec.persistence, k);
    }
    return amps;
}

std::vector<double> perlin_field_raw(const PerlinSpec& spec, int width, int height) {
    validate_spec(spec);
    if (width < 1 || height < 1)
        throw DataError("perlin_field: zero-size image requested");

    const std::vector<double> amps = octave_amplitudes(spec);
    std::vector<double> field(static_cast<std::size_t>(width) * height, 0.0);
    for (int k = 0; k < spec.octaves; ++k) {
        if (amps[k] == 0.0) continue;
        const std::uint64_t octave_seed = derive_seed(spec.seed, k, "octave");
        const double freq = spec.base_frequency * std::pow(2.0, k);
        const double sx = freq / width;
        const double sy = freq / height;
        std::size_t idx = 0;
        for (int y = 0; y < height; ++y) {
            const double ny = y * sy;
            for (int x = 0; x < width; ++x, ++idx) {
                field[idx] += amps[k] * perlin_noise2(octave_seed, x * sx, ny);
            }
        }
    }
    return field;
}

ShadowMask perlin_field(const PerlinSpec& spec, int width, int height) {
    const std::vector<double> raw = perlin_field_raw(spec, width, height);
    double lo = raw[0], hi = raw[0];
    for (double v : raw) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ShadowMask mask(width, height, 3);
    const double range = hi - lo;
    std::size_t idx = 0;
    for (int y = 0; y < height; ++y) {
        float* row = mask.row(y);
        for (int x = 0; x < width; ++x, ++idx) {
            const double v = range > 0.0 ? (raw[idx] - lo) / range : 0.5;
            const auto f = static_cast<float>(v);
            row[3 * x + 0] = f;
            row[3 * x + 1] = f;
            row[3 * x + 2] = f;
        }
    }
    return mask;
}

std::pair<ShadowMask, PerlinSpec> sample_perlin_mask(std::uint64_t seed, int width,
                                                     int height,
                                                     const PerlinMaskParams& params) {
    Rng rng(derive_seed(seed, 0, "perlin-spec"));
    PerlinSpec spec;
    spec.seed = derive_seed(seed, 0, "perlin-field");
    spec.octaves = params.octaves;
    spec.persistence = rng.uniform(params.persistence_min, params.persistence_max);
    spec.initial_amplitude = 1.0;
    spec.base_frequency = params.base_frequency;
    return {perlin_field(spec, width, height), spec};
}

}  // namespace umbra
