#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace umbra {

/// 2D facial mesh vertices plus the bilateral mirror-index table.
/// The production topology has 468 vertices; the algorithms accept any
/// count so synthetic fixtures can be small.
struct LandmarkSet {
    std::vector<std::array<float, 2>> points;  // (u, v) in pixel coordinates
    std::vector<int> mirror;                   // j -> mirrored vertex index

    std::size_t size() const { return points.size(); }

    /// Throws DataError unless mirror is an involution of the right length.
    void validate_mirror() const;

    /// Throws DataError if any point leaves [0,w-1]x[0,h-1].
    void validate_bounds(int width, int height) const;
};

/// Vertex count of the interchange format.
inline constexpr std::size_t kLandmarkCount = 468;

/// JSON document {"version":1, "points":[[u,v]...], "mirror":[...]}.
/// The interchange format fixes 468 vertices; the mirror table is
/// validated as an involution at load.
LandmarkSet load_landmarks_json(const std::filesystem::path& path);
void save_landmarks_json(const std::filesystem::path& path, const LandmarkSet& lm);

}  // namespace umbra
