#include "umbra/foreign.hpp"

#include "umbra/error.hpp"
#include "umbra/rng.hpp"

namespace umbra {

ImageBuf blend(const ImageBuf& lit, const ImageBuf& shadowed, const ShadowMask& mask) {
    if (!lit.same_shape(shadowed) || !lit.same_shape(mask))
        throw DataError("blend: image and mask shapes do not match");
    ImageBuf out(lit.width(), lit.height(), lit.channels());
    const float* l = lit.data().data();
    const float* s = shadowed.data().data();
    const float* m = mask.data().data();
    float* o = out.data().data();
    const std::size_t n = lit.sample_count();
    for (std::size_t i = 0; i < n; ++i) {
        o[i] = l[i] * (1.0f - m[i]) + s[i] * m[i];
    }
    return out;
}

ForeignSample synth_foreign(const ImageBuf& lit, std::uint64_t seed,
                            const AblationFlags& ablation, const ForeignParams& params,
                            const SilhouetteCorpus* corpus) {
    if (lit.channels() != 3)
        throw DataError("synth_foreign: lit image must have 3 channels");
    if (!lit.all_finite() || !in_unit_range(lit))
        throw DataError("synth_foreign: lit image must be finite and in [0,1]");

    ForeignSample sample;
    sample.lit = lit;
    ForeignProvenance& prov = sample.provenance;
    prov.seed = seed;
    prov.ablation = ablation;
    prov.spatial = params.spatial;

    // Input mask.
    const std::uint64_t mask_seed = derive_seed(seed, 0, "mask");
    MaskSource source;
    switch (params.source_mode) {
        case MaskSourceMode::PerlinOnly: source = MaskSource::Perlin; break;
        case MaskSourceMode::SilhouetteOnly: source = MaskSource::Silhouette; break;
        default: source = sample_mask_source(mask_seed); break;
    }
    prov.mask_source = source;

    ShadowMask m_in;
    if (source == MaskSource::Perlin) {
        auto [mask, spec] =
            sample_perlin_mask(mask_seed, lit.width(), lit.height(), params.perlin);
        m_in = std::move(mask);
        prov.perlin_spec = spec;
    } else {
        if (corpus == nullptr || corpus->empty())
            throw DataError("synth_foreign: silhouette mask requested but no corpus given");
        const SilhouetteSpec spec =
            sample_silhouette_spec(mask_seed, corpus->size(), params.silhouette);
        m_in = silhouette_mask(*corpus, spec, lit.width(), lit.height());
        prov.silhouette_spec = spec;
    }

    // Color jitter; No-Color keeps a fixed darkening so the shadow remains
    // visible instead of vanishing.
    ColorJitter jitter;
    if (ablation.no_color) {
        jitter.ccm = mat3_scale(params.no_color_gain);
    } else {
        jitter = sample_ccm(derive_seed(seed, 0, "ccm"));
    }
    prov.ccm = jitter.ccm;
    const ImageBuf shadowed = apply_ccm(lit, jitter);

    // Subsurface scattering.
    ShadowMask m_ss = ablation.no_ss ? m_in : ss_blur(m_in, params.scatter);

    // Spatial variation.
    if (!ablation.no_sv) {
        const SpatialVariation sv =
            spatial_variation_fields(seed, lit.width(), lit.height(), params.spatial);
        prov.sv_blur_spec = sv.blur_spec;
        prov.sv_intensity_spec = sv.intensity_spec;
        m_ss = apply_spatial_variation(m_ss, sv);
    }

    sample.mask = std::move(m_ss);
    sample.composite = blend(sample.lit, shadowed, sample.mask);
    return sample;
}

}  // namespace umbra
