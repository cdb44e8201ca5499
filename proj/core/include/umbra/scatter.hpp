#pragma once

#include <vector>

#include "umbra/image.hpp"

namespace umbra {

/// Normalized 1D Gaussian kernel sampled at integer offsets, radius
/// ceil(4.5*sigma). sigma <= 0 degenerates to the identity kernel {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with edge-clamp boundary, every channel.
ImageBuf gaussian_blur(const ImageBuf& img, double sigma);

/// Per-channel sum-of-Gaussians diffusion profile. Red must scatter at
/// least as far as green, green at least as far as blue.
struct ScatterProfile {
    struct Term {
        double sigma;
        double weight;
    };
    std::vector<Term> red;
    std::vector<Term> green;
    std::vector<Term> blue;

    /// Sigmas (pixels at 256x256): red {2,6,12}, green {2,4,8},
    /// blue {2,3,6}, uniform weights.
    static ScatterProfile defaults();

    /// Per-axis variance of the mixture, sum of w*sigma^2.
    double second_moment(int channel) const;

    /// Throws DataError unless sigmas are positive, per-channel weights
    /// sum to 1 within 1e-9, and second moments order red >= green >= blue.
    void validate() const;
};

/// Subsurface-scattering approximation: each channel of the mask is
/// convolved with its weighted Gaussian sum. Accepts 1- or 3-channel
/// input; output is the 3-channel mask M_ss in [0,1]. Constant masks pass
/// through unchanged because each mixture integrates to 1.
ShadowMask ss_blur(const ShadowMask& m_in, const ScatterProfile& profile);

}  // namespace umbra
