#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"
#include "umbra/foreign.hpp"
#include "umbra/metrics.hpp"
#include "umbra/olat.hpp"
#include "umbra/perlin.hpp"
#include "umbra/scatter.hpp"
#include "umbra/symmetry.hpp"

using namespace umbra;

static void PerlinField(benchmark::State& state) {
    PerlinSpec spec;
    spec.seed = 1;
    spec.octaves = 4;
    spec.persistence = 0.6;
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(perlin_field(spec, n, n));
        spec.seed++;
    }
    state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(PerlinField)->Arg(128)->Arg(256);

static void ScatterBlur(benchmark::State& state) {
    const auto [mask, spec] = sample_perlin_mask(2, 256, 256);
    const ScatterProfile profile = ScatterProfile::defaults();
    for (auto _ : state) {
        benchmark::DoNotOptimize(ss_blur(mask, profile));
    }
}
BENCHMARK(ScatterBlur)->Unit(benchmark::kMillisecond);

static void SpatialVariationApply(benchmark::State& state) {
    const auto [mask, mask_spec] = sample_perlin_mask(3, 256, 256);
    const SpatialVariation sv = spatial_variation_fields(4, 256, 256);
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_spatial_variation(mask, sv));
    }
}
BENCHMARK(SpatialVariationApply)->Unit(benchmark::kMillisecond);

static void ForeignSynthesis(benchmark::State& state) {
    const ImageBuf lit = test::synthetic_face(256, 5);
    ForeignParams params;
    params.source_mode = MaskSourceMode::PerlinOnly;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            synth_foreign(lit, seed++, AblationFlags{}, params, nullptr));
    }
}
BENCHMARK(ForeignSynthesis)->Unit(benchmark::kMillisecond);

static void Relight(benchmark::State& state) {
    const LightRig rig = synthetic_rig(304, 20);
    const OlatScan scan = synthetic_scan(rig, static_cast<int>(state.range(0)));
    WeightVector w(scan.images.size(), 0.004);
    w[100] = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(relight(scan, w));
    }
}
BENCHMARK(Relight)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void MirrorWarp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const LandmarkSet lm =
        test::symmetric_grid_landmarks(26, 18, (n - 1) / 2.0, n / 64.0, 8.0, n / 20.0);
    const ImageBuf img = test::synthetic_face(n, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mirror_warp(img, lm));
    }
}
BENCHMARK(MirrorWarp)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void Ssim(benchmark::State& state) {
    const ImageBuf a = test::synthetic_face(256, 7);
    ImageBuf b = a;
    for (float& v : b.data()) v *= 0.98f;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ssim(a, b));
    }
}
BENCHMARK(Ssim)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
