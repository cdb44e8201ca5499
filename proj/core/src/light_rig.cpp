#include "umbra/light_rig.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>

#include <nlohmann/json.hpp>

#include "umbra/error.hpp"
#include "umbra/image_io.hpp"

namespace umbra {

int LightRig::active_count() const {
    int n = 0;
    for (const Light& l : lights) n += l.active ? 1 : 0;
    return n;
}

std::vector<int> LightRig::active_indices() const {
    std::vector<int> idx;
    idx.reserve(lights.size());
    for (int i = 0; i < light_count(); ++i) {
        if (lights[i].active) idx.push_back(i);
    }
    return idx;
}

int LightRig::slot_of(int light_index) const {
    if (light_index < 0 || light_index >= light_count() || !lights[light_index].active)
        return -1;
    int slot = 0;
    for (int i = 0; i < light_index; ++i) slot += lights[i].active ? 1 : 0;
    return slot;
}

void LightRig::validate() const {
    constexpr double kTol = 1e-9;
    for (int i = 0; i < light_count(); ++i) {
        if (std::abs(lights[i].dir.norm() - 1.0) > kTol)
            throw DataError("rig: light " + std::to_string(i) + " direction is not unit (|v| = " +
                            std::to_string(lights[i].dir.norm()) + ")");
    }
    if (std::abs(camera_axis.norm() - 1.0) > kTol)
        throw DataError("rig: camera axis is not unit");
    if (active_count() < 1) throw DataError("rig: no active lights");
}

LightRig load_rig_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_rig_json: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
        LightRig rig;
        const auto& n = doc.at("n");
        rig.camera_axis = {n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()};
        for (const auto& l : doc.at("lights")) {
            const auto& d = l.at("dir");
            LightRig::Light light;
            light.dir = {d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>()};
            light.active = l.value("active", true);
            rig.lights.push_back(light);
        }
        rig.validate();
        return rig;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_rig_json: " + path.string() + ": " + e.what());
    }
}

void save_rig_json(const std::filesystem::path& path, const LightRig& rig) {
    nlohmann::json lights = nlohmann::json::array();
    for (const auto& l : rig.lights) {
        lights.push_back({{"dir", {l.dir.x, l.dir.y, l.dir.z}}, {"active", l.active}});
    }
    nlohmann::json doc{
        {"n", {rig.camera_axis.x, rig.camera_axis.y, rig.camera_axis.z}},
        {"lights", lights}};
    std::ofstream out(path);
    if (!out) throw DataError("save_rig_json: cannot open " + path.string());
    out << doc.dump() << "\n";
}

LightRig synthetic_rig(int light_count, int inactive_count) {
    if (light_count < 1) throw DataError("synthetic_rig: light_count must be >= 1");
    if (inactive_count < 0 || inactive_count >= light_count)
        throw DataError("synthetic_rig: inactive_count out of range");

    LightRig rig;
    rig.camera_axis = {0.0, 0.0, 1.0};
    const double golden_angle = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < light_count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / light_count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double theta = golden_angle * k;
        Vec3 dir{r * std::cos(theta), r * std::sin(theta), z};
        rig.lights.push_back({dir.normalized(), true});
    }

    // Deactivate the lights furthest behind the subject, mirroring the
    // curation step that removes extreme-angle lights.
    std::vector<int> order(light_count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double da = rig.lights[a].dir.dot(rig.camera_axis);
        const double db = rig.lights[b].dir.dot(rig.camera_axis);
        if (da != db) return da < db;
        return a < b;
    });
    for (int i = 0; i < inactive_count; ++i) rig.lights[order[i]].active = false;
    rig.validate();
    return rig;
}

void OlatScan::validate(const LightRig& rig) const {
    if (static_cast<int>(images.size()) != rig.active_count())
        throw DataError("scan: image count " + std::to_string(images.size()) +
                        " does not match active light count " +
                        std::to_string(rig.active_count()));
    for (std::size_t i = 1; i < images.size(); ++i) {
        if (!images[i].same_shape(images[0]))
            throw DataError("scan: image " + std::to_string(i) + " has mismatched dimensions");
    }
}

OlatScan load_scan(const std::filesystem::path& dir, const LightRig& rig) {
    const auto index_path = dir / "index.json";
    std::ifstream in(index_path);
    if (!in) throw DataError("load_scan: cannot open " + index_path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_scan: " + index_path.string() + ": " + e.what());
    }

    OlatScan scan;
    scan.subject_id = doc.value("subject", "");
    const auto& images = doc.at("images");
    for (int light_index : rig.active_indices()) {
        const std::string key = std::to_string(light_index);
        if (!images.contains(key))
            throw DataError("load_scan: no image for active light " + key);
        const std::filesystem::path file = dir / images.at(key).get<std::string>();
        if (file.extension() == ".pfm") {
            scan.images.push_back(load_pfm(file));
        } else {
            scan.images.push_back(load_png(file));
        }
    }
    scan.validate(rig);
    return scan;
}

namespace {

struct Sphere {
    Vec3 center;
    double radius;
};

// Nearest forward intersection of the ray p + t*d with the sphere, if any.
std::optional<double> intersect(const Sphere& s, const Vec3& p, const Vec3& d) {
    const Vec3 oc = p - s.center;
    const double b = oc.dot(d);
    const double c = oc.dot(oc) - s.radius * s.radius;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double sq = std::sqrt(disc);
    const double t0 = -b - sq;
    const double t1 = -b + sq;
    if (t0 > 1e-6) return t0;
    if (t1 > 1e-6) return t1;
    return std::nullopt;
}

}  // namespace

OlatScan synthetic_scan(const LightRig& rig, int resolution) {
    if (resolution < 8) throw DataError("synthetic_scan: resolution must be >= 8");
    rig.validate();

    const Sphere head{{0.0, 0.0, 0.0}, 0.75};
    const Sphere nose{{0.0, 0.12, 0.72}, 0.18};
    const double albedo[3] = {0.90, 0.75, 0.65};

    OlatScan scan;
    scan.subject_id = "synthetic-sphere";
    for (int light_index : rig.active_indices()) {
        const Vec3 light = rig.lights[light_index].dir;
        ImageBuf img(resolution, resolution, 3, 0.0f);
        for (int i = 0; i < resolution; ++i) {
            const double py = 1.0 - 2.0 * (i + 0.5) / resolution;
            float* row = img.row(i);
            for (int j = 0; j < resolution; ++j) {
                const double px = 2.0 * (j + 0.5) / resolution - 1.0;
                const Vec3 origin{px, py, 4.0};
                const Vec3 ray{0.0, 0.0, -1.0};

                const auto t_head = intersect(head, origin, ray);
                const auto t_nose = intersect(nose, origin, ray);
                const Sphere* hit_sphere = nullptr;
                double t_hit = 0.0;
                if (t_head && (!t_nose || *t_head < *t_nose)) {
                    hit_sphere = &head;
                    t_hit = *t_head;
                }
                if (t_nose && (!t_head || *t_nose <= *t_head)) {
                    hit_sphere = &nose;
                    t_hit = *t_nose;
                }
                if (!hit_sphere) continue;

                const Vec3 p = origin + ray * t_hit;
                const Vec3 normal = (p - hit_sphere->center) * (1.0 / hit_sphere->radius);
                double lambert = normal.dot(light);
                if (lambert <= 0.0) continue;

                // Hard cast shadow from the other sphere.
                const Sphere& blocker = hit_sphere == &head ? nose : head;
                if (intersect(blocker, p, light)) lambert = 0.0;

                row[3 * j + 0] = static_cast<float>(albedo[0] * lambert);
                row[3 * j + 1] = static_cast<float>(albedo[1] * lambert);
                row[3 * j + 2] = static_cast<float>(albedo[2] * lambert);
            }
        }
        scan.images.push_back(std::move(img));
    }
    return scan;
}

}  // namespace umbra
