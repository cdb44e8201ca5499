#pragma once

#include "umbra/image.hpp"

namespace umbra {

/// Mean absolute difference over all samples.
double l1_pixel(const ImageBuf& a, const ImageBuf& b);

/// Capped at 99 dB so identical images stay finite in report tables.
inline constexpr double kPsnrCap = 99.0;

double psnr(const ImageBuf& a, const ImageBuf& b, double peak = 1.0);

/// Mean SSIM over 11x11 Gaussian windows (sigma 1.5, K1=0.01, K2=0.03,
/// peak 1), computed on Rec. 709 luma of linear RGB; only fully valid
/// windows contribute. Throws DataError for images smaller than 11x11.
double ssim(const ImageBuf& a, const ImageBuf& b);

}  // namespace umbra
