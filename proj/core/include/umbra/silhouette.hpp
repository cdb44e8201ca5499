#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "umbra/image.hpp"

namespace umbra {

/// Binary coverage map of one occluder silhouette.
struct Silhouette {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> coverage;  // row-major, 0 or 1
    std::string name;

    std::uint8_t at(int y, int x) const {
        return coverage[static_cast<std::size_t>(y) * width + x];
    }
};

/// Read-only corpus of silhouettes, loaded once and shared across samples.
class SilhouetteCorpus {
public:
    /// Load every PNG in the directory (sorted by filename), or the files
    /// named by an `index.json` list when present. Pixels with encoded
    /// luminance > 0.5 count as covered.
    static SilhouetteCorpus load(const std::filesystem::path& dir);

    void add(Silhouette s) { items_.push_back(std::move(s)); }
    bool empty() const { return items_.empty(); }
    std::size_t size() const { return items_.size(); }
    const Silhouette& operator[](std::size_t i) const { return items_[i]; }

private:
    std::vector<Silhouette> items_;
};

/// Placement of one silhouette: scaled by `scale`, stamped on a square
/// lattice of pitch `tile_period` pixels, rotated by `rotation`, with a
/// random phase offset. Sampling wraps, so the frame is always covered.
struct SilhouetteSpec {
    std::uint64_t seed = 0;
    int silhouette_id = 0;
    double scale = 1.0;
    double tile_period = 128.0;
    double rotation = 0.0;  // radians
    double phase_x = 0.0;
    double phase_y = 0.0;
};

struct SilhouetteSamplingParams {
    double scale_min = 0.5;
    double scale_max = 2.0;
    double period_min = 64.0;
    double period_max = 256.0;
};

/// Hard {0,1} coverage mask from a tiled silhouette; softening happens in
/// later synthesis stages. Nearest-neighbor sampling keeps it binary.
/// Throws DataError on an empty corpus or a degenerate scale/period.
ShadowMask silhouette_mask(const SilhouetteCorpus& corpus, const SilhouetteSpec& spec,
                           int width, int height);

SilhouetteSpec sample_silhouette_spec(std::uint64_t seed, std::size_t corpus_size,
                                      const SilhouetteSamplingParams& params = {});

enum class MaskSource { Silhouette, Perlin };

/// Bernoulli(0.5) choice between the two mask families on the seeded stream.
MaskSource sample_mask_source(std::uint64_t seed);

const char* to_string(MaskSource source);

}  // namespace umbra
