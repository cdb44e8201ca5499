#pragma once

#include <cstdint>
#include <optional>

#include "umbra/color_jitter.hpp"
#include "umbra/image.hpp"
#include "umbra/perlin.hpp"
#include "umbra/scatter.hpp"
#include "umbra/silhouette.hpp"
#include "umbra/spatial_variation.hpp"

namespace umbra {

/// I = I_lit * (1 - M) + I_shadowed * M, per pixel per channel.
/// M == 0 returns the lit value bit-exactly, M == 1 the shadowed value.
ImageBuf blend(const ImageBuf& lit, const ImageBuf& shadowed, const ShadowMask& mask);

/// Stages skipped when synthesizing, matching the trained-model ablations:
/// no_sv drops spatially varying blur and intensity, no_ss drops the
/// subsurface scattering blur, no_color freezes the jitter to a plain 0.5
/// darkening so the shadow stays visible.
struct AblationFlags {
    bool no_sv = false;
    bool no_ss = false;
    bool no_color = false;
};

enum class MaskSourceMode { Both, PerlinOnly, SilhouetteOnly };

struct ForeignParams {
    MaskSourceMode source_mode = MaskSourceMode::Both;
    PerlinMaskParams perlin;
    SilhouetteSamplingParams silhouette;
    ScatterProfile scatter = ScatterProfile::defaults();
    SpatialVariationParams spatial;
    double no_color_gain = 0.5;
};

/// Everything needed to replay one sample: the blend of stored lit image,
/// ccm and mask reproduces the composite bit-exactly.
struct ForeignProvenance {
    std::uint64_t seed = 0;
    AblationFlags ablation;
    MaskSource mask_source = MaskSource::Perlin;
    std::optional<PerlinSpec> perlin_spec;
    std::optional<SilhouetteSpec> silhouette_spec;
    Mat3 ccm = mat3_identity();
    std::optional<PerlinSpec> sv_blur_spec;
    std::optional<PerlinSpec> sv_intensity_spec;
    SpatialVariationParams spatial;
};

struct ForeignSample {
    ImageBuf composite;  // network input I
    ImageBuf lit;        // ground truth
    ShadowMask mask;     // final M
    ForeignProvenance provenance;
};

/// Full synthesis chain: mask sampling, subsurface blur, spatial variation,
/// color jitter, blend. Stage parameters come from named substreams of
/// `seed` (mask, ccm, sv-blur, sv-intensity), so ablating one stage never
/// shifts the draws of another. `corpus` may be null only when the source
/// mode never picks silhouettes.
ForeignSample synth_foreign(const ImageBuf& lit, std::uint64_t seed,
                            const AblationFlags& ablation, const ForeignParams& params,
                            const SilhouetteCorpus* corpus);

}  // namespace umbra
