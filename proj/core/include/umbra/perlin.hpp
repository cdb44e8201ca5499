#pragma once

#include <cstdint>
#include <vector>

#include "umbra/image.hpp"

namespace umbra {

/// Multi-octave gradient-lattice noise parameters. Octave k contributes
/// with amplitude initial_amplitude * persistence^k at frequency
/// base_frequency * 2^k (cycles per image edge).
struct PerlinSpec {
    std::uint64_t seed = 0;
    int octaves = 4;
    double persistence = 0.5;
    double initial_amplitude = 1.0;
    double base_frequency = 4.0;
};

/// Single-octave classic gradient noise at (x, y). Zero at integer lattice
/// coordinates by construction. Range is within [-sqrt(2)/2, sqrt(2)/2].
double perlin_noise2(std::uint64_t seed, double x, double y);

/// Amplitude of each octave: initial_amplitude * persistence^k.
std::vector<double> octave_amplitudes(const PerlinSpec& spec);

/// Raw octave sum over the pixel grid, before any normalization.
/// Pixel (row, col) samples noise at (col/width, row/height) scaled by the
/// octave frequency, so lattice points land on the image grid.
std::vector<double> perlin_field_raw(const PerlinSpec& spec, int width, int height);

/// Octave sum affinely normalized to [0,1] (per-field min/max), replicated
/// to 3 channels. A constant raw field maps to 0.5. Throws DataError on
/// zero-size output or invalid spec.
ShadowMask perlin_field(const PerlinSpec& spec, int width, int height);

struct PerlinMaskParams {
    int octaves = 4;
    double persistence_min = 0.0;
    double persistence_max = 0.85;
    double base_frequency = 4.0;
};

/// Draw a PerlinSpec (persistence ~ U[persistence_min, persistence_max],
/// amplitude fixed at 1.0) and evaluate it. Returns the mask and the spec
/// that produced it, for the sample manifest.
std::pair<ShadowMask, PerlinSpec> sample_perlin_mask(std::uint64_t seed, int width,
                                                     int height,
                                                     const PerlinMaskParams& params = {});

}  // namespace umbra
