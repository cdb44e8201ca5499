#include "umbra/silhouette.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "umbra/error.hpp"
#include "umbra/image_io.hpp"
#include "umbra/rng.hpp"

namespace umbra {

namespace {

Silhouette binarize(const ImageBuf& img, std::string name) {
    Silhouette s;
    s.width = img.width();
    s.height = img.height();
    s.name = std::move(name);
    s.coverage.resize(static_cast<std::size_t>(s.width) * s.height);
    std::size_t idx = 0;
    for (int y = 0; y < s.height; ++y) {
        for (int x = 0; x < s.width; ++x, ++idx) {
            const float lum =
                (img.at(y, x, 0) + img.at(y, x, 1) + img.at(y, x, 2)) / 3.0f;
            s.coverage[idx] = lum > 0.5f ? 1 : 0;
        }
    }
    return s;
}

inline double floor_mod(double a, double m) {
    const double r = std::fmod(a, m);
    return r < 0.0 ? r + m : r;
}

inline int wrap_index(std::int64_t i, int n) {
    const int r = static_cast<int>(i % n);
    return r < 0 ? r + n : r;
}

}  // namespace

SilhouetteCorpus SilhouetteCorpus::load(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw DataError("silhouette corpus: not a directory: " + dir.string());

    std::vector<fs::path> files;
    const fs::path index = dir / "index.json";
    if (fs::exists(index)) {
        std::ifstream in(index);
        nlohmann::json doc;
        try {
            in >> doc;
            for (const auto& name : doc) files.push_back(dir / name.get<std::string>());
        } catch (const nlohmann::json::exception& e) {
            throw DataError("silhouette corpus: bad index.json: " + std::string(e.what()));
        }
    } else {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.path().extension() == ".png") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
    }

    SilhouetteCorpus corpus;
    for (const auto& f : files) {
        corpus.add(binarize(load_png(f), f.filename().string()));
    }
    return corpus;
}

ShadowMask silhouette_mask(const SilhouetteCorpus& corpus, const SilhouetteSpec& spec,
                           int width, int height) {
    if (corpus.empty()) throw DataError("silhouette_mask: empty corpus");
    if (spec.silhouette_id < 0 ||
        static_cast<std::size_t>(spec.silhouette_id) >= corpus.size())
        throw DataError("silhouette_mask: silhouette id " +
                        std::to_string(spec.silhouette_id) + " out of range");
    if (!std::isfinite(spec.scale) || spec.scale <= 0.0)
        throw DataError("silhouette_mask: degenerate scale " + std::to_string(spec.scale));
    if (!std::isfinite(spec.tile_period) || spec.tile_period < 1.0)
        throw DataError("silhouette_mask: tile period must be >= 1 pixel");
    if (width < 1 || height < 1)
        throw DataError("silhouette_mask: zero-size image requested");

    const Silhouette& sil = corpus[static_cast<std::size_t>(spec.silhouette_id)];
    const double c = std::cos(spec.rotation);
    const double s = std::sin(spec.rotation);

    ShadowMask mask(width, height, 3);
    for (int y = 0; y < height; ++y) {
        float* row = mask.row(y);
        for (int x = 0; x < width; ++x) {
            // Rotate the output grid into lattice space, then wrap into one
            // tile cell and into the silhouette raster.
            const double qx = c * x + s * y + spec.phase_x;
            const double qy = -s * x + c * y + spec.phase_y;
            const double cu = floor_mod(qx, spec.tile_period);
            const double cv = floor_mod(qy, spec.tile_period);
            const auto sx = static_cast<std::int64_t>(std::floor(cu / spec.scale));
            const auto sy = static_cast<std::int64_t>(std::floor(cv / spec.scale));
            const float v =
                sil.at(wrap_index(sy, sil.height), wrap_index(sx, sil.width)) ? 1.0f : 0.0f;
            row[3 * x + 0] = v;
            row[3 * x + 1] = v;
            row[3 * x + 2] = v;
        }
    }
    return mask;
}

SilhouetteSpec sample_silhouette_spec(std::uint64_t seed, std::size_t corpus_size,
                                      const SilhouetteSamplingParams& params) {
    if (corpus_size == 0)
        throw DataError("sample_silhouette_spec: empty corpus");
    Rng rng(derive_seed(seed, 0, "silhouette-spec"));
    SilhouetteSpec spec;
    spec.seed = seed;
    spec.silhouette_id = static_cast<int>(rng.uniform_index(corpus_size));
    spec.scale = rng.uniform(params.scale_min, params.scale_max);
    spec.tile_period = rng.uniform(params.period_min, params.period_max);
    spec.rotation = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    spec.phase_x = rng.uniform(0.0, spec.tile_period);
    spec.phase_y = rng.uniform(0.0, spec.tile_period);
    return spec;
}

MaskSource sample_mask_source(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0, "mask-source"));
    return rng.bernoulli_half() ? MaskSource::Perlin : MaskSource::Silhouette;
}

const char* to_string(MaskSource source) {
    return source == MaskSource::Perlin ? "perlin" : "silhouette";
}

}  // namespace umbra
