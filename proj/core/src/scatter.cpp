#include "umbra/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "umbra/error.hpp"

namespace umbra {

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) return {1.0};
    const int radius = std::max(1, static_cast<int>(std::ceil(4.5 * sigma)));
    std::vector<double> k(2 * radius + 1);
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-i * i * inv2s2);
        k[i + radius] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

namespace {

// One separable pass along x then y, double accumulation, edge clamp.
// Border columns take the clamped path; the interior runs unchecked.
void blur_pass_x(const ImageBuf& src, ImageBuf& dst, const std::vector<double>& k) {
    const int radius = static_cast<int>(k.size() / 2);
    const int w = src.width(), h = src.height(), ch = src.channels();
    const int lo = std::min(radius, w);
    const int hi = std::max(lo, w - radius);
    for (int y = 0; y < h; ++y) {
        const float* srow = src.row(y);
        float* drow = dst.row(y);
        auto clamped = [&](int x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                for (int t = -radius; t <= radius; ++t) {
                    const int xs = std::clamp(x + t, 0, w - 1);
                    acc += k[t + radius] * srow[xs * ch + c];
                }
                drow[x * ch + c] = static_cast<float>(acc);
            }
        };
        for (int x = 0; x < lo; ++x) clamped(x);
        for (int x = lo; x < hi; ++x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                const float* s = srow + (x - radius) * ch + c;
                for (int t = 0; t < 2 * radius + 1; ++t, s += ch) acc += k[t] * *s;
                drow[x * ch + c] = static_cast<float>(acc);
            }
        }
        for (int x = hi; x < w; ++x) clamped(x);
    }
}

// Vertical pass as row-wise accumulation, which keeps memory access
// sequential.
void blur_pass_y(const ImageBuf& src, ImageBuf& dst, const std::vector<double>& k,
                 std::vector<double>& acc_row) {
    const int radius = static_cast<int>(k.size() / 2);
    const int w = src.width(), h = src.height(), ch = src.channels();
    const std::size_t row_samples = static_cast<std::size_t>(w) * ch;
    acc_row.resize(row_samples);
    for (int y = 0; y < h; ++y) {
        std::fill(acc_row.begin(), acc_row.end(), 0.0);
        for (int t = -radius; t <= radius; ++t) {
            const int ys = std::clamp(y + t, 0, h - 1);
            const double kt = k[t + radius];
            const float* srow = src.row(ys);
            for (std::size_t i = 0; i < row_samples; ++i) acc_row[i] += kt * srow[i];
        }
        float* drow = dst.row(y);
        for (std::size_t i = 0; i < row_samples; ++i)
            drow[i] = static_cast<float>(acc_row[i]);
    }
}

ImageBuf extract_channel(const ImageBuf& img, int c) {
    ImageBuf out(img.width(), img.height(), 1);
    for (int y = 0; y < img.height(); ++y) {
        const float* srow = img.row(y);
        float* drow = out.row(y);
        for (int x = 0; x < img.width(); ++x) drow[x] = srow[x * img.channels() + c];
    }
    return out;
}

}  // namespace

ImageBuf gaussian_blur(const ImageBuf& img, double sigma) {
    if (!(sigma > 0.0)) return img;
    const std::vector<double> k = gaussian_kernel(sigma);
    ImageBuf tmp(img.width(), img.height(), img.channels());
    ImageBuf out(img.width(), img.height(), img.channels());
    std::vector<double> scratch;
    blur_pass_x(img, tmp, k);
    blur_pass_y(tmp, out, k, scratch);
    return out;
}

ScatterProfile ScatterProfile::defaults() {
    constexpr double w = 1.0 / 3.0;
    ScatterProfile p;
    p.red = {{2.0, w}, {6.0, w}, {12.0, w}};
    p.green = {{2.0, w}, {4.0, w}, {8.0, w}};
    p.blue = {{2.0, w}, {3.0, w}, {6.0, w}};
    return p;
}

double ScatterProfile::second_moment(int channel) const {
    const std::vector<Term>& terms = channel == 0 ? red : channel == 1 ? green : blue;
    double m = 0.0;
    for (const Term& t : terms) m += t.weight * t.sigma * t.sigma;
    return m;
}

void ScatterProfile::validate() const {
    const std::vector<Term>* chans[3] = {&red, &green, &blue};
    const char* names[3] = {"red", "green", "blue"};
    for (int c = 0; c < 3; ++c) {
        if (chans[c]->empty())
            throw DataError(std::string("scatter profile: no terms for ") + names[c]);
        double wsum = 0.0;
        for (const Term& t : *chans[c]) {
            if (!(t.sigma > 0.0))
                throw DataError(std::string("scatter profile: non-positive sigma in ") +
                                names[c]);
            wsum += t.weight;
        }
        if (std::abs(wsum - 1.0) > 1e-9)
            throw DataError(std::string("scatter profile: ") + names[c] +
                            " weights sum to " + std::to_string(wsum) + ", expected 1");
    }
    if (!(second_moment(0) >= second_moment(1) && second_moment(1) >= second_moment(2)))
        throw DataError("scatter profile: effective radius must order red >= green >= blue");
}

ShadowMask ss_blur(const ShadowMask& m_in, const ScatterProfile& profile) {
    if (m_in.channels() != 1 && m_in.channels() != 3)
        throw DataError("ss_blur: expected 1- or 3-channel mask");
    if (!in_unit_range(m_in)) throw DataError("ss_blur: mask outside [0,1]");
    profile.validate();

    const std::vector<ScatterProfile::Term>* chans[3] = {&profile.red, &profile.green,
                                                         &profile.blue};
    const std::size_t pixels = static_cast<std::size_t>(m_in.width()) * m_in.height();
    ShadowMask out(m_in.width(), m_in.height(), 3);
    std::vector<double> acc(pixels);
    for (int c = 0; c < 3; ++c) {
        const ImageBuf src = extract_channel(m_in, m_in.channels() == 1 ? 0 : c);
        std::fill(acc.begin(), acc.end(), 0.0);
        // Double accumulation keeps constant masks constant to ~1 ulp.
        for (const auto& term : *chans[c]) {
            const ImageBuf blurred = gaussian_blur(src, term.sigma);
            for (std::size_t i = 0; i < pixels; ++i)
                acc[i] += term.weight * static_cast<double>(blurred.data()[i]);
        }
        std::size_t i = 0;
        for (int y = 0; y < out.height(); ++y) {
            float* drow = out.row(y);
            for (int x = 0; x < out.width(); ++x, ++i)
                drow[x * 3 + c] = static_cast<float>(std::clamp(acc[i], 0.0, 1.0));
        }
    }
    return out;
}

}  // namespace umbra
