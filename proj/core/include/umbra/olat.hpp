#pragma once

#include <cstdint>
#include <vector>

#include "umbra/light_rig.hpp"

namespace umbra {

/// Weights over the rig's active lights, ordered like active_indices().
using WeightVector = std::vector<double>;

/// Linear relighting: the exact weighted sum of OLAT images in linear
/// light, accumulated per pixel in fixed light order. No clamping;
/// headroom above 1 is allowed. Throws DataError on length mismatch.
ImageBuf relight(const OlatScan& scan, const WeightVector& weights);

/// Rig indices of the m active lights angularly nearest to `center`
/// (largest dot product; ties broken by lower index). Result is sorted
/// ascending. Throws DataError unless 1 <= m <= active count.
std::vector<int> neighbors(const LightRig& rig, const Vec3& center, int m);

/// Reflection of the key direction about the camera axis:
/// l_fill = 2 (l_key . n) n - l_key. Inputs must be unit within 1e-6.
Vec3 fill_direction(const Vec3& l_key, const Vec3& camera_axis);

/// Key light at p_key, every other active light at the small ambient
/// epsilon. epsilon must be strictly positive (a zero floor would render
/// shadowed pixels fully black) and below p_key.
WeightVector harsh_weights(const LightRig& rig, int key_index, double p_key, double eps);

/// Light sizes the softening model trains on.
inline const std::vector<int> kLightSizes = {5, 10, 20, 30, 40};

/// Fixed fill neighborhood size.
inline constexpr int kFillNeighborhood = 20;

/// Splat the key energy over its m nearest lights (p_key / m each), put
/// p_fill on the fill neighborhood minus the key's, epsilon elsewhere.
/// The key branch wins where the neighborhoods overlap. The last key
/// weight absorbs division rounding so the splat sums to p_key exactly.
/// m must come from `allowed_m`; p_fill must lie in [0, p_key / 10].
WeightVector soft_weights(const LightRig& rig, int key_index, double p_key, int m,
                          double p_fill, double eps,
                          int fill_neighborhood = kFillNeighborhood,
                          const std::vector<int>& allowed_m = kLightSizes);

struct FacialPairParams {
    double p_key_min = 0.7;
    double p_key_max = 1.3;
    double eps_ratio = 0.005;   // epsilon = eps_ratio * p_key
    double p_fill_ratio = 0.1;  // p_fill ~ U[0, p_fill_ratio * p_key]
    std::vector<int> light_sizes = kLightSizes;
    int fill_neighborhood = kFillNeighborhood;
};

/// One harsh/soft training pair plus the two knob values the softening
/// model conditions on.
struct FacialPair {
    ImageBuf harsh;
    ImageBuf soft;
    int key_index = 0;
    double p_key = 0.0;
    int m = 0;
    double p_fill = 0.0;
    double eps = 0.0;
    std::uint64_t seed = 0;
};

/// Sample key light, intensity, light size and fill intensity from named
/// substreams of `seed`, then render both images.
FacialPair make_pair(const OlatScan& scan, const LightRig& rig, std::uint64_t seed,
                     const FacialPairParams& params = {});

}  // namespace umbra
