#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "umbra/image.hpp"

namespace umbra {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

/// Spherical rig of point lights. `dir` is the unit direction from the
/// subject center toward each light (a light's location defines its
/// direction); `camera_axis` points out of the stage toward the camera.
/// Curation flags degenerate lights inactive; only active lights render
/// and carry scan images.
struct LightRig {
    struct Light {
        Vec3 dir;
        bool active = true;
    };

    std::vector<Light> lights;
    Vec3 camera_axis{0.0, 0.0, 1.0};

    int light_count() const { return static_cast<int>(lights.size()); }
    int active_count() const;
    /// Rig indices of active lights, ascending.
    std::vector<int> active_indices() const;
    /// Position of a rig light within the active ordering, or -1.
    int slot_of(int light_index) const;

    /// Throws DataError unless all directions and the camera axis are unit
    /// within 1e-9 and at least one light is active.
    void validate() const;
};

/// JSON {"n":[x,y,z], "lights":[{"dir":[x,y,z],"active":bool}]}.
LightRig load_rig_json(const std::filesystem::path& path);
void save_rig_json(const std::filesystem::path& path, const LightRig& rig);

/// Evenly distributed synthetic rig (Fibonacci sphere). The
/// `inactive_count` lights furthest behind the subject (most negative dot
/// with the camera axis) are flagged inactive, mirroring the curation that
/// drops degenerate lights. Defaults give 304 lights with 284 active.
LightRig synthetic_rig(int light_count = 304, int inactive_count = 20);

/// One image per active light, ordered like LightRig::active_indices().
struct OlatScan {
    std::vector<ImageBuf> images;
    std::string subject_id;

    /// Throws DataError unless image count matches the rig's active count
    /// and all dimensions agree.
    void validate(const LightRig& rig) const;
};

/// Scan directory layout: index.json {"subject":..., "images":{"<light
/// index>":"file", ...}} with one entry per active light; PFM or PNG files.
OlatScan load_scan(const std::filesystem::path& dir, const LightRig& rig);

/// Lambertian sphere with a nose-like bump, lit one light at a time with
/// hard cast shadows. Deterministic; exists so the facial pipeline can run
/// at desk scale without proprietary scan data.
OlatScan synthetic_scan(const LightRig& rig, int resolution);

}  // namespace umbra
