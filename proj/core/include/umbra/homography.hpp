#pragma once

#include <array>
#include <filesystem>
#include <utility>
#include <vector>

#include "umbra/image.hpp"

namespace umbra {

/// Plane projective transform, normalized so h[2][2] == 1.
struct Homography {
    std::array<std::array<double, 3>, 3> h{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    std::pair<double, double> apply(double x, double y) const;
    double determinant() const;
    Homography inverse() const;  // throws DataError when singular
};

struct Correspondence {
    double x1, y1;  // source
    double x2, y2;  // destination
};

struct DltResult {
    Homography homography;
    double reprojection_rms = 0.0;
};

/// Least-squares direct linear transform with Hartley coordinate
/// pre-normalization. Needs >= 4 pairs in general position; degenerate
/// configurations (e.g. 3 collinear points of a minimal set) throw
/// DataError.
DltResult dlt_homography(const std::vector<Correspondence>& pairs);

/// Inverse-map bilinear warp: output(p) = input(H^-1 p), edge-clamped.
/// H maps input coordinates to output coordinates.
ImageBuf warp_homography(const ImageBuf& img, const Homography& h);

/// Align the shadowed image to every candidate with its correspondences
/// and return the index of the candidate with minimum mean absolute pixel
/// error (ties to the lowest index).
int select_counterpart(const ImageBuf& shadowed, const std::vector<ImageBuf>& candidates,
                       const std::vector<std::vector<Correspondence>>& correspondences);

/// JSON list of [[x,y],[x',y']] pairs.
std::vector<Correspondence> load_correspondences_json(const std::filesystem::path& path);

}  // namespace umbra
