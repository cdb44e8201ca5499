#include "umbra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "umbra/error.hpp"

namespace umbra {

double l1_pixel(const ImageBuf& a, const ImageBuf& b) {
    if (!a.same_shape(b)) throw DataError("l1_pixel: shape mismatch");
    double acc = 0.0;
    const float* pa = a.data().data();
    const float* pb = b.data().data();
    const std::size_t n = a.sample_count();
    for (std::size_t i = 0; i < n; ++i) acc += std::abs(static_cast<double>(pa[i]) - pb[i]);
    return acc / static_cast<double>(n);
}

double psnr(const ImageBuf& a, const ImageBuf& b, double peak) {
    if (!a.same_shape(b)) throw DataError("psnr: shape mismatch");
    double acc = 0.0;
    const float* pa = a.data().data();
    const float* pb = b.data().data();
    const std::size_t n = a.sample_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(pa[i]) - pb[i];
        acc += d * d;
    }
    const double mse = acc / static_cast<double>(n);
    if (mse == 0.0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::vector<double> window_kernel() {
    std::vector<double> k(kWindow);
    const int r = kWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - r;
        k[i] = std::exp(-d * d / (2.0 * kWindowSigma * kWindowSigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

std::vector<double> luma_of(const ImageBuf& img) {
    const std::size_t pixels = static_cast<std::size_t>(img.width()) * img.height();
    std::vector<double> luma(pixels);
    if (img.channels() == 3) {
        const float* p = img.data().data();
        for (std::size_t i = 0; i < pixels; ++i, p += 3)
            luma[i] = 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2];
    } else if (img.channels() == 1) {
        for (std::size_t i = 0; i < pixels; ++i) luma[i] = img.data()[i];
    } else {
        throw DataError("ssim: expected 1- or 3-channel images");
    }
    return luma;
}

// Valid-mode separable windowed mean; output is (w-10) x (h-10).
std::vector<double> window_means(const std::vector<double>& field, int w, int h,
                                 const std::vector<double>& k) {
    const int r = kWindow / 2;
    const int ow = w - 2 * r;
    const int oh = h - 2 * r;
    std::vector<double> horiz(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t) acc += k[t] * field[y * w + x + t];
            horiz[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int t = 0; t < kWindow; ++t)
                acc += k[t] * horiz[static_cast<std::size_t>(y + t) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    }
    return out;
}

}  // namespace

double ssim(const ImageBuf& a, const ImageBuf& b) {
    if (!a.same_shape(b)) throw DataError("ssim: shape mismatch");
    if (a.width() < kWindow || a.height() < kWindow)
        throw DataError("ssim: image smaller than the 11x11 window");

    const int w = a.width();
    const int h = a.height();
    const std::vector<double> k = window_kernel();
    const std::vector<double> la = luma_of(a);
    const std::vector<double> lb = luma_of(b);

    const std::size_t n = la.size();
    std::vector<double> laa(n), lbb(n), lab(n);
    for (std::size_t i = 0; i < n; ++i) {
        laa[i] = la[i] * la[i];
        lbb[i] = lb[i] * lb[i];
        lab[i] = la[i] * lb[i];
    }

    const auto mu_a = window_means(la, w, h, k);
    const auto mu_b = window_means(lb, w, h, k);
    const auto m_aa = window_means(laa, w, h, k);
    const auto m_bb = window_means(lbb, w, h, k);
    const auto m_ab = window_means(lab, w, h, k);

    constexpr double c1 = kK1 * kK1;  // peak = 1
    constexpr double c2 = kK2 * kK2;
    double acc = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ua = mu_a[i];
        const double ub = mu_b[i];
        const double var_a = m_aa[i] - ua * ua;
        const double var_b = m_bb[i] - ub * ub;
        const double cov = m_ab[i] - ua * ub;
        const double num = (2.0 * ua * ub + c1) * (2.0 * cov + c2);
        const double den = (ua * ua + ub * ub + c1) * (var_a + var_b + c2);
        acc += num / den;
    }
    return acc / static_cast<double>(mu_a.size());
}

}  // namespace umbra
