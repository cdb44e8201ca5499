#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "support/fixtures.hpp"
#include "umbra/error.hpp"
#include "umbra/perlin.hpp"
#include "umbra/rng.hpp"
#include "umbra/silhouette.hpp"

using namespace umbra;

TEST_CASE("perlin fields are deterministic in the spec") {
    PerlinSpec spec;
    spec.seed = 0xfeedULL;
    spec.octaves = 4;
    spec.persistence = 0.6;
    const ShadowMask a = perlin_field(spec, 64, 48);
    const ShadowMask b = perlin_field(spec, 64, 48);
    CHECK(a.data() == b.data());

    spec.seed = 0xfeefULL;
    const ShadowMask c = perlin_field(spec, 64, 48);
    CHECK(a.data() != c.data());
}

TEST_CASE("zero persistence reduces to a single octave bit-exactly") {
    PerlinSpec multi;
    multi.seed = 42;
    multi.octaves = 4;
    multi.persistence = 0.0;
    PerlinSpec single = multi;
    single.octaves = 1;
    const ShadowMask a = perlin_field(multi, 32, 32);
    const ShadowMask b = perlin_field(single, 32, 32);
    CHECK(a.data() == b.data());
}

TEST_CASE("gradient noise vanishes exactly at lattice points") {
    // Property of gradient-lattice noise: the corner gradient is dotted
    // with a zero offset vector and the fade weights select that corner.
    for (std::uint64_t seed : {1ULL, 99ULL, 0xabcdefULL}) {
        for (int x = -3; x <= 3; ++x) {
            for (int y = -3; y <= 3; ++y) {
                CHECK(perlin_noise2(seed, static_cast<double>(x), static_cast<double>(y)) ==
                      0.0);
            }
        }
    }
    // Off-lattice values are generally nonzero.
    int nonzero = 0;
    for (int i = 0; i < 16; ++i) {
        if (perlin_noise2(7, 0.31 + i, 0.77) != 0.0) ++nonzero;
    }
    CHECK(nonzero > 8);
}

TEST_CASE("octave amplitudes follow the persistence power law exactly") {
    PerlinSpec spec;
    spec.octaves = 6;
    spec.persistence = 0.37;
    spec.initial_amplitude = 1.0;
    const auto amps = octave_amplitudes(spec);
    REQUIRE(amps.size() == 6);
    for (int k = 0; k < 6; ++k) CHECK(amps[k] == std::pow(0.37, k));

    spec.persistence = 0.0;
    const auto zero_amps = octave_amplitudes(spec);
    CHECK(zero_amps[0] == 1.0);
    for (int k = 1; k < 6; ++k) CHECK(zero_amps[k] == 0.0);
}

TEST_CASE("normalized fields span [0,1] and replicate channels") {
    PerlinSpec spec;
    spec.seed = 2024;
    spec.persistence = 0.5;
    const ShadowMask mask = perlin_field(spec, 128, 128);
    REQUIRE(mask.channels() == 3);
    CHECK(mask.min_value() == 0.0f);
    CHECK(mask.max_value() == 1.0f);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            CHECK(mask.at(y, x, 0) == mask.at(y, x, 1));
            CHECK(mask.at(y, x, 0) == mask.at(y, x, 2));
        }
}

TEST_CASE("perlin_field rejects bad requests") {
    PerlinSpec spec;
    CHECK_THROWS_AS(perlin_field(spec, 0, 32), DataError);
    spec.octaves = 0;
    CHECK_THROWS_AS(perlin_field(spec, 32, 32), DataError);
    spec.octaves = 4;
    spec.persistence = 1.5;
    CHECK_THROWS_AS(perlin_field(spec, 32, 32), DataError);
}

TEST_CASE("sampled perlin masks stay in the published persistence range") {
    std::set<double> seen;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        Rng rng(derive_seed(seed, 0, "perlin-spec"));
        const double p = rng.uniform(0.0, 0.85);
        CHECK(p >= 0.0);
        CHECK(p < 0.85);
        seen.insert(p);
    }
    // Distinct seeds produce distinct specs (no collisions across 10k).
    CHECK(seen.size() == 10000);
}

TEST_CASE("sample_perlin_mask returns the spec that produced the mask") {
    const auto [mask, spec] = sample_perlin_mask(123, 64, 64);
    CHECK(spec.octaves == 4);
    CHECK(spec.initial_amplitude == 1.0);
    CHECK(in_unit_range(mask));
    const ShadowMask replay = perlin_field(spec, 64, 64);
    CHECK(replay.data() == mask.data());
}

TEST_CASE("silhouette: full-frame ones tile to an all-ones mask") {
    SilhouetteCorpus corpus;
    corpus.add(test::ones_silhouette(32));
    SilhouetteSpec spec;
    spec.silhouette_id = 0;
    spec.scale = 1.7;
    spec.tile_period = 77.0;
    spec.rotation = 0.83;
    spec.phase_x = 12.5;
    spec.phase_y = 3.25;
    const ShadowMask mask = silhouette_mask(corpus, spec, 96, 64);
    CHECK(mask.min_value() == 1.0f);
}

TEST_CASE("silhouette: unit scale and matching period reproduce the source tile") {
    SilhouetteCorpus corpus;
    corpus.add(test::disk_silhouette(32));
    SilhouetteSpec spec;
    spec.silhouette_id = 0;
    spec.scale = 1.0;
    spec.tile_period = 32.0;
    spec.rotation = 0.0;
    const ShadowMask mask = silhouette_mask(corpus, spec, 128, 128);
    const Silhouette& sil = corpus[0];
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x)
            CHECK(mask.at(y, x, 0) == (sil.at(y % 32, x % 32) ? 1.0f : 0.0f));
}

TEST_CASE("silhouette: tiled coverage matches one tile's coverage") {
    SilhouetteCorpus corpus;
    corpus.add(test::disk_silhouette(32));
    SilhouetteSpec spec;
    spec.silhouette_id = 0;
    spec.scale = 1.0;
    spec.tile_period = 32.0;
    spec.rotation = 0.0;
    // Period-aligned frame: 4x4 tiles.
    const ShadowMask mask = silhouette_mask(corpus, spec, 128, 128);

    double tile_cov = 0.0;
    for (std::uint8_t v : corpus[0].coverage) tile_cov += v;
    tile_cov /= corpus[0].coverage.size();

    double mask_cov = 0.0;
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x) mask_cov += mask.at(y, x, 0);
    mask_cov /= 128.0 * 128.0;

    CHECK(std::abs(mask_cov - tile_cov) <= 0.02);
}

TEST_CASE("silhouette error paths") {
    SilhouetteCorpus empty;
    SilhouetteSpec spec;
    CHECK_THROWS_WITH_AS(silhouette_mask(empty, spec, 32, 32),
                         doctest::Contains("empty corpus"), DataError);

    SilhouetteCorpus corpus;
    corpus.add(test::disk_silhouette(16));
    spec.scale = 0.0;
    CHECK_THROWS_WITH_AS(silhouette_mask(corpus, spec, 32, 32),
                         doctest::Contains("degenerate scale"), DataError);
    spec.scale = 1.0;
    spec.tile_period = 0.5;
    CHECK_THROWS_AS(silhouette_mask(corpus, spec, 32, 32), DataError);
    spec.tile_period = 16.0;
    spec.silhouette_id = 3;
    CHECK_THROWS_AS(silhouette_mask(corpus, spec, 32, 32), DataError);
}

TEST_CASE("sampled silhouette specs are deterministic and in range") {
    const SilhouetteSpec a = sample_silhouette_spec(99, 10);
    const SilhouetteSpec b = sample_silhouette_spec(99, 10);
    CHECK(a.silhouette_id == b.silhouette_id);
    CHECK(a.scale == b.scale);
    CHECK(a.tile_period == b.tile_period);
    CHECK(a.rotation == b.rotation);
    CHECK(a.phase_x == b.phase_x);

    SilhouetteSamplingParams params;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const SilhouetteSpec s = sample_silhouette_spec(seed, 10, params);
        CHECK(s.silhouette_id >= 0);
        CHECK(s.silhouette_id < 10);
        CHECK(s.scale >= params.scale_min);
        CHECK(s.scale <= params.scale_max);
        CHECK(s.tile_period >= params.period_min);
        CHECK(s.tile_period <= params.period_max);
    }
}

TEST_CASE("mask source split is an even coin") {
    int perlin = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        if (sample_mask_source(seed) == MaskSource::Perlin) ++perlin;
    }
    const double freq = perlin / 10000.0;
    CHECK(freq >= 0.48);
    CHECK(freq <= 0.52);

    // Fixed seed, fixed choice.
    CHECK(sample_mask_source(424242) == sample_mask_source(424242));
}

TEST_CASE("mask source draws from disjoint streams look independent") {
    // Chi-square on the 2x2 contingency table of paired draws.
    int counts[2][2] = {{0, 0}, {0, 0}};
    const int n = 10000;
    for (std::uint64_t seed = 0; seed < n; ++seed) {
        const int a = sample_mask_source(seed) == MaskSource::Perlin ? 1 : 0;
        const int b =
            sample_mask_source(seed + 0x8000000000000000ULL) == MaskSource::Perlin ? 1 : 0;
        ++counts[a][b];
    }
    const double row0 = counts[0][0] + counts[0][1];
    const double row1 = counts[1][0] + counts[1][1];
    const double col0 = counts[0][0] + counts[1][0];
    const double col1 = counts[0][1] + counts[1][1];
    double chi2 = 0.0;
    const double expected[2][2] = {{row0 * col0 / n, row0 * col1 / n},
                                   {row1 * col0 / n, row1 * col1 / n}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double d = counts[i][j] - expected[i][j];
            chi2 += d * d / expected[i][j];
        }
    // df = 1; 10.83 is the 0.001 critical value.
    CHECK(chi2 < 10.83);
}
