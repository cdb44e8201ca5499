#include "umbra/landmarks.hpp"

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "umbra/error.hpp"

namespace umbra {

void LandmarkSet::validate_mirror() const {
    if (mirror.size() != points.size())
        throw DataError("landmarks: mirror table length " + std::to_string(mirror.size()) +
                        " does not match vertex count " + std::to_string(points.size()));
    const int n = static_cast<int>(points.size());
    for (int j = 0; j < n; ++j) {
        const int m = mirror[j];
        if (m < 0 || m >= n)
            throw DataError("landmarks: mirror[" + std::to_string(j) +
                            "] = " + std::to_string(m) + " out of range");
        if (mirror[m] != j)
            throw DataError("landmarks: mirror is not an involution at vertex " +
                            std::to_string(j) + " (mirror[mirror[j]] = " +
                            std::to_string(mirror[m]) + ")");
    }
}

void LandmarkSet::validate_bounds(int width, int height) const {
    for (std::size_t j = 0; j < points.size(); ++j) {
        const float u = points[j][0];
        const float v = points[j][1];
        if (u < 0.0f || u > static_cast<float>(width - 1) || v < 0.0f ||
            v > static_cast<float>(height - 1))
            throw DataError("landmarks: vertex " + std::to_string(j) + " at (" +
                            std::to_string(u) + ", " + std::to_string(v) +
                            ") outside " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
}

LandmarkSet load_landmarks_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_landmarks_json: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_landmarks_json: " + path.string() + ": " + e.what());
    }
    if (doc.value("version", 0) != 1)
        throw DataError("load_landmarks_json: unsupported version in " + path.string());

    LandmarkSet lm;
    try {
        for (const auto& p : doc.at("points")) {
            lm.points.push_back({p.at(0).get<float>(), p.at(1).get<float>()});
        }
        for (const auto& m : doc.at("mirror")) {
            lm.mirror.push_back(m.get<int>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_landmarks_json: " + path.string() + ": " + e.what());
    }
    if (lm.points.size() != kLandmarkCount)
        throw DataError("load_landmarks_json: expected " + std::to_string(kLandmarkCount) +
                        " points, got " + std::to_string(lm.points.size()));
    lm.validate_mirror();
    return lm;
}

void save_landmarks_json(const std::filesystem::path& path, const LandmarkSet& lm) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : lm.points) points.push_back({p[0], p[1]});
    nlohmann::json doc{{"version", 1}, {"points", points}, {"mirror", lm.mirror}};
    std::ofstream out(path);
    if (!out) throw DataError("save_landmarks_json: cannot open " + path.string());
    out << doc.dump() << "\n";
}

}  // namespace umbra
