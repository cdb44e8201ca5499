#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "umbra/image.hpp"
#include "umbra/landmarks.hpp"
#include "umbra/rng.hpp"
#include "umbra/silhouette.hpp"

namespace umbra::test {

/// Smooth face-like linear-light image: skin-toned ellipse with darker
/// eye/mouth features on a dim background. Deterministic in seed.
inline ImageBuf synthetic_face(int size, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0, "face-fixture"));
    const double hue = rng.uniform(-0.05, 0.05);
    const double skin[3] = {0.62 + hue, 0.45, 0.34 - hue};

    ImageBuf img(size, size, 3);
    for (int y = 0; y < size; ++y) {
        const double ny = 2.0 * (y + 0.5) / size - 1.0;
        float* row = img.row(y);
        for (int x = 0; x < size; ++x) {
            const double nx = 2.0 * (x + 0.5) / size - 1.0;
            const double r2 = nx * nx / 0.55 + ny * ny / 0.8;
            double v[3] = {0.06, 0.07, 0.09};  // background
            if (r2 < 1.0) {
                const double shade = 1.0 - 0.35 * r2;
                for (int c = 0; c < 3; ++c) v[c] = skin[c] * shade;
                // Eyes and mouth as soft dark spots.
                const double eye_l = std::exp(-((nx + 0.28) * (nx + 0.28) + (ny + 0.22) * (ny + 0.22)) / 0.006);
                const double eye_r = std::exp(-((nx - 0.28) * (nx - 0.28) + (ny + 0.22) * (ny + 0.22)) / 0.006);
                const double mouth = std::exp(-(nx * nx / 0.03 + (ny - 0.42) * (ny - 0.42) / 0.004));
                const double dark = 0.8 * eye_l + 0.8 * eye_r + 0.5 * mouth;
                for (int c = 0; c < 3; ++c) v[c] *= std::max(0.15, 1.0 - dark);
            }
            for (int c = 0; c < 3; ++c)
                row[x * 3 + c] = static_cast<float>(std::clamp(v[c], 0.0, 1.0));
        }
    }
    return img;
}

/// Grid landmarks symmetric about the vertical line x = cx; mirror pairs
/// columns left-to-right within each row.
inline LandmarkSet symmetric_grid_landmarks(int cols, int rows, double cx, double x_step,
                                            double y0, double y_step) {
    LandmarkSet lm;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const double offset = (c - (cols - 1) / 2.0) * x_step;
            lm.points.push_back({static_cast<float>(cx + offset),
                                 static_cast<float>(y0 + r * y_step)});
            lm.mirror.push_back(r * cols + (cols - 1 - c));
        }
    }
    return lm;
}

inline Silhouette disk_silhouette(int size, double radius_frac = 0.35) {
    Silhouette s;
    s.width = size;
    s.height = size;
    s.name = "disk";
    s.coverage.resize(static_cast<std::size_t>(size) * size, 0);
    const double r = radius_frac * size;
    const double cx = (size - 1) / 2.0;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = x - cx, dy = y - cx;
            if (dx * dx + dy * dy <= r * r)
                s.coverage[static_cast<std::size_t>(y) * size + x] = 1;
        }
    }
    return s;
}

inline Silhouette ones_silhouette(int size) {
    Silhouette s;
    s.width = size;
    s.height = size;
    s.name = "ones";
    s.coverage.assign(static_cast<std::size_t>(size) * size, 1);
    return s;
}

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("umbra-" + tag + "-" + std::to_string(rd()) + "-" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Order-independent digest of a directory tree: FNV over sorted relative
/// paths and file bytes.
inline std::uint64_t hash_tree(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_bytes = [&h](const char* data, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(data[i]);
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& f : files) {
        const std::string rel = fs::relative(f, root).generic_string();
        mix_bytes(rel.data(), rel.size());
        std::ifstream in(f, std::ios::binary);
        char buf[4096];
        while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
            mix_bytes(buf, static_cast<std::size_t>(in.gcount()));
            if (!in) break;
        }
    }
    return h;
}

}  // namespace umbra::test
