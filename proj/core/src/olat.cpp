#include "umbra/olat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umbra/error.hpp"
#include "umbra/rng.hpp"

namespace umbra {

ImageBuf relight(const OlatScan& scan, const WeightVector& weights) {
    if (scan.images.empty()) throw DataError("relight: empty scan");
    if (weights.size() != scan.images.size())
        throw DataError("relight: " + std::to_string(weights.size()) + " weights for " +
                        std::to_string(scan.images.size()) + " images");
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw DataError("relight: weights must be finite and non-negative");
    }

    const ImageBuf& first = scan.images[0];
    std::vector<double> acc(first.sample_count(), 0.0);
    for (std::size_t i = 0; i < scan.images.size(); ++i) {
        if (!scan.images[i].same_shape(first))
            throw DataError("relight: scan images have mismatched dimensions");
        const double w = weights[i];
        if (w == 0.0) continue;
        const float* src = scan.images[i].data().data();
        for (std::size_t s = 0; s < acc.size(); ++s) acc[s] += w * src[s];
    }

    ImageBuf out(first.width(), first.height(), first.channels());
    for (std::size_t s = 0; s < acc.size(); ++s)
        out.data()[s] = static_cast<float>(acc[s]);
    return out;
}

std::vector<int> neighbors(const LightRig& rig, const Vec3& center, int m) {
    const std::vector<int> active = rig.active_indices();
    if (m < 1 || m > static_cast<int>(active.size()))
        throw DataError("neighbors: m = " + std::to_string(m) + " outside [1, " +
                        std::to_string(active.size()) + "]");

    std::vector<std::pair<double, int>> scored;
    scored.reserve(active.size());
    for (int idx : active) scored.emplace_back(rig.lights[idx].dir.dot(center), idx);
    std::partial_sort(scored.begin(), scored.begin() + m, scored.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });

    std::vector<int> result(m);
    for (int i = 0; i < m; ++i) result[i] = scored[i].second;
    std::sort(result.begin(), result.end());
    return result;
}

Vec3 fill_direction(const Vec3& l_key, const Vec3& camera_axis) {
    constexpr double kTol = 1e-6;
    if (std::abs(l_key.norm() - 1.0) > kTol)
        throw DataError("fill_direction: key direction is not unit");
    if (std::abs(camera_axis.norm() - 1.0) > kTol)
        throw DataError("fill_direction: camera axis is not unit");
    const double d = l_key.dot(camera_axis);
    return camera_axis * (2.0 * d) - l_key;
}

namespace {

void check_key(const LightRig& rig, int key_index) {
    if (key_index < 0 || key_index >= rig.light_count())
        throw DataError("weights: key light index " + std::to_string(key_index) +
                        " out of range");
    if (!rig.lights[key_index].active)
        throw DataError("weights: key light " + std::to_string(key_index) + " is inactive");
}

}  // namespace

WeightVector harsh_weights(const LightRig& rig, int key_index, double p_key, double eps) {
    check_key(rig, key_index);
    if (!(eps > 0.0))
        throw DataError("harsh_weights: epsilon must be > 0; zero ambient renders "
                        "shadowed pixels fully black");
    if (!(p_key > eps))
        throw DataError("harsh_weights: p_key must exceed epsilon");

    WeightVector w(rig.active_count(), eps);
    w[rig.slot_of(key_index)] = p_key;
    return w;
}

WeightVector soft_weights(const LightRig& rig, int key_index, double p_key, int m,
                          double p_fill, double eps, int fill_neighborhood,
                          const std::vector<int>& allowed_m) {
    check_key(rig, key_index);
    if (!(eps > 0.0)) throw DataError("soft_weights: epsilon must be > 0");
    if (!(p_key > eps)) throw DataError("soft_weights: p_key must exceed epsilon");
    if (std::find(allowed_m.begin(), allowed_m.end(), m) == allowed_m.end())
        throw DataError("soft_weights: light size m = " + std::to_string(m) +
                        " not in the allowed set");
    if (!(p_fill >= 0.0 && p_fill <= p_key / 10.0))
        throw DataError("soft_weights: p_fill = " + std::to_string(p_fill) +
                        " outside [0, p_key/10]");

    const Vec3 l_key = rig.lights[key_index].dir;
    const Vec3 l_fill = fill_direction(l_key, rig.camera_axis);
    const std::vector<int> omega_key = neighbors(rig, l_key, m);
    const int fill_m = std::min(fill_neighborhood, rig.active_count());
    const std::vector<int> omega_fill = neighbors(rig, l_fill, fill_m);

    WeightVector w(rig.active_count(), eps);
    for (int idx : omega_fill) w[rig.slot_of(idx)] = p_fill;

    // Key branch wins on overlap. The final member takes the exact
    // remainder so the splat conserves p_key bit-for-bit under ascending
    // summation.
    const double q = p_key / m;
    double assigned = 0.0;
    for (std::size_t i = 0; i + 1 < omega_key.size(); ++i) {
        w[rig.slot_of(omega_key[i])] = q;
        assigned += q;
    }
    w[rig.slot_of(omega_key.back())] = p_key - assigned;
    return w;
}

FacialPair make_pair(const OlatScan& scan, const LightRig& rig, std::uint64_t seed,
                     const FacialPairParams& params) {
    scan.validate(rig);
    const std::vector<int> active = rig.active_indices();

    FacialPair pair;
    pair.seed = seed;
    pair.key_index =
        active[Rng(derive_seed(seed, 0, "key")).uniform_index(active.size())];
    pair.p_key = Rng(derive_seed(seed, 0, "p-key"))
                     .uniform(params.p_key_min, params.p_key_max);
    pair.m = params.light_sizes[Rng(derive_seed(seed, 0, "light-size"))
                                    .uniform_index(params.light_sizes.size())];
    // The draw bound p_fill_ratio * p_key can land one ulp above the
    // p_key/10 contract; clamp keeps every pair inside it.
    pair.p_fill = std::min(Rng(derive_seed(seed, 0, "p-fill"))
                               .uniform(0.0, params.p_fill_ratio * pair.p_key),
                           pair.p_key / 10.0);
    pair.eps = params.eps_ratio * pair.p_key;

    pair.harsh = relight(scan, harsh_weights(rig, pair.key_index, pair.p_key, pair.eps));
    pair.soft = relight(scan, soft_weights(rig, pair.key_index, pair.p_key, pair.m,
                                           pair.p_fill, pair.eps,
                                           params.fill_neighborhood, params.light_sizes));
    return pair;
}

}  // namespace umbra
