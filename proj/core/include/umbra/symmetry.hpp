#pragma once

#include <vector>

#include "umbra/image.hpp"
#include "umbra/landmarks.hpp"

namespace umbra {

inline constexpr int kDefaultKSigma = 4;

/// Per-vertex RBF bandwidth: the k_sigma'th smallest squared distance from
/// vertex j to the other vertices (self excluded). Densely packed vertices
/// get small bandwidths, sparse ones large. Throws DataError when
/// coincident vertices drive a bandwidth to zero, naming the pair.
std::vector<double> vertex_sigmas(const LandmarkSet& landmarks,
                                  int k_sigma = kDefaultKSigma);

/// Dense row-stochastic weight matrix for every pixel of a width x height
/// grid: W[i][j] = exp(-D_ij / sigma_j), normalized per row with
/// max-subtraction. Row-major over pixels. Test/diagnostic mode; the warp
/// itself streams and never materializes this.
std::vector<double> weight_matrix(int width, int height, const LandmarkSet& landmarks,
                                  const std::vector<double>& sigmas);

/// Per-pixel mirrored source coordinates: the W-weighted average of the
/// mirrored vertex positions. Kept in double so coordinate identities hold
/// to much better than a hundredth of a pixel.
struct WarpField {
    int width = 0;
    int height = 0;
    std::vector<double> target_x;  // row-major
    std::vector<double> target_y;
    std::vector<double> sigmas;

    double x_at(int y, int x) const { return target_x[static_cast<std::size_t>(y) * width + x]; }
    double y_at(int y, int x) const { return target_y[static_cast<std::size_t>(y) * width + x]; }
};

WarpField warp_field(int width, int height, const LandmarkSet& landmarks,
                     int k_sigma = kDefaultKSigma);

/// Resample the image so each face region is replaced by its bilaterally
/// symmetric counterpart: bilinear lookup of the input at the warp-field
/// target, edge-clamped. Validates the mirror involution first.
ImageBuf mirror_warp(const ImageBuf& img, const LandmarkSet& landmarks,
                     int k_sigma = kDefaultKSigma);

/// Channel-stack the image with its mirrored rendition, image first.
ImageBuf concat_mirrored(const ImageBuf& img, const ImageBuf& mirrored);

/// Per-pixel max-channel absolute difference |I - mirror|, the diagnostic
/// that highlights asymmetric (shadowed) regions.
ImageBuf mirror_difference(const ImageBuf& img, const ImageBuf& mirrored);

}  // namespace umbra
