#include "umbra/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "umbra/error.hpp"

namespace umbra {

std::vector<double> vertex_sigmas(const LandmarkSet& landmarks, int k_sigma) {
    const int n = static_cast<int>(landmarks.size());
    if (k_sigma < 1) throw DataError("vertex_sigmas: k_sigma must be >= 1");
    if (n < k_sigma + 1)
        throw DataError("vertex_sigmas: need at least " + std::to_string(k_sigma + 1) +
                        " vertices, got " + std::to_string(n));

    std::vector<double> sigmas(n);
    std::vector<double> dists(n - 1);
    for (int j = 0; j < n; ++j) {
        const double uj = landmarks.points[j][0];
        const double vj = landmarks.points[j][1];
        int t = 0;
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double du = uj - landmarks.points[k][0];
            const double dv = vj - landmarks.points[k][1];
            dists[t++] = du * du + dv * dv;
        }
        std::nth_element(dists.begin(), dists.begin() + (k_sigma - 1), dists.end());
        const double sigma = dists[k_sigma - 1];
        if (!(sigma > 0.0)) {
            // Name one coincident partner for the error message.
            int dup = -1;
            for (int k = 0; k < n && dup < 0; ++k) {
                if (k == j) continue;
                const double du = uj - landmarks.points[k][0];
                const double dv = vj - landmarks.points[k][1];
                if (du * du + dv * dv == 0.0) dup = k;
            }
            throw DataError("vertex_sigmas: zero bandwidth at vertex " + std::to_string(j) +
                            " (coincident with vertex " + std::to_string(dup) + ")");
        }
        sigmas[j] = sigma;
    }
    return sigmas;
}

std::vector<double> weight_matrix(int width, int height, const LandmarkSet& landmarks,
                                  const std::vector<double>& sigmas) {
    const int n = static_cast<int>(landmarks.size());
    if (sigmas.size() != landmarks.size())
        throw DataError("weight_matrix: sigma count does not match vertex count");
    for (double s : sigmas) {
        if (!(s > 0.0)) throw DataError("weight_matrix: sigmas must be positive");
    }

    std::vector<double> w(static_cast<std::size_t>(width) * height * n);
    std::vector<double> expo(n);
    std::size_t row_base = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x, row_base += n) {
            double peak = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                const double du = x - landmarks.points[j][0];
                const double dv = y - landmarks.points[j][1];
                expo[j] = -(du * du + dv * dv) / sigmas[j];
                peak = std::max(peak, expo[j]);
            }
            double sum = 0.0;
            for (int j = 0; j < n; ++j) {
                const double e = std::exp(expo[j] - peak);
                w[row_base + j] = e;
                sum += e;
            }
            for (int j = 0; j < n; ++j) w[row_base + j] /= sum;
        }
    }
    return w;
}

WarpField warp_field(int width, int height, const LandmarkSet& landmarks, int k_sigma) {
    landmarks.validate_mirror();
    WarpField field;
    field.width = width;
    field.height = height;
    field.sigmas = vertex_sigmas(landmarks, k_sigma);
    field.target_x.resize(static_cast<std::size_t>(width) * height);
    field.target_y.resize(static_cast<std::size_t>(width) * height);

    const int n = static_cast<int>(landmarks.size());
    std::vector<double> expo(n);
    std::size_t idx = 0;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x, ++idx) {
            double peak = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                const double du = x - landmarks.points[j][0];
                const double dv = y - landmarks.points[j][1];
                expo[j] = -(du * du + dv * dv) / field.sigmas[j];
                peak = std::max(peak, expo[j]);
            }
            double sum = 0.0, tx = 0.0, ty = 0.0;
            for (int j = 0; j < n; ++j) {
                const double e = std::exp(expo[j] - peak);
                const int mj = landmarks.mirror[j];
                sum += e;
                tx += e * landmarks.points[mj][0];
                ty += e * landmarks.points[mj][1];
            }
            field.target_x[idx] = tx / sum;
            field.target_y[idx] = ty / sum;
        }
    }
    return field;
}

ImageBuf mirror_warp(const ImageBuf& img, const LandmarkSet& landmarks, int k_sigma) {
    const WarpField field = warp_field(img.width(), img.height(), landmarks, k_sigma);
    ImageBuf out(img.width(), img.height(), img.channels());
    std::size_t idx = 0;
    for (int y = 0; y < img.height(); ++y) {
        float* drow = out.row(y);
        for (int x = 0; x < img.width(); ++x, ++idx) {
            for (int c = 0; c < img.channels(); ++c) {
                drow[x * img.channels() + c] =
                    sample_bilinear(img, field.target_x[idx], field.target_y[idx], c);
            }
        }
    }
    return out;
}

ImageBuf concat_mirrored(const ImageBuf& img, const ImageBuf& mirrored) {
    if (img.width() != mirrored.width() || img.height() != mirrored.height() ||
        img.channels() != mirrored.channels())
        throw DataError("concat_mirrored: shape mismatch");
    ImageBuf out(img.width(), img.height(), img.channels() * 2);
    const int ch = img.channels();
    for (int y = 0; y < img.height(); ++y) {
        const float* a = img.row(y);
        const float* b = mirrored.row(y);
        float* d = out.row(y);
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < ch; ++c) {
                d[x * 2 * ch + c] = a[x * ch + c];
                d[x * 2 * ch + ch + c] = b[x * ch + c];
            }
        }
    }
    return out;
}

ImageBuf mirror_difference(const ImageBuf& img, const ImageBuf& mirrored) {
    if (!img.same_shape(mirrored))
        throw DataError("mirror_difference: shape mismatch");
    ImageBuf out(img.width(), img.height(), 1);
    const int ch = img.channels();
    for (int y = 0; y < img.height(); ++y) {
        const float* a = img.row(y);
        const float* b = mirrored.row(y);
        float* d = out.row(y);
        for (int x = 0; x < img.width(); ++x) {
            float peak = 0.0f;
            for (int c = 0; c < ch; ++c)
                peak = std::max(peak, std::abs(a[x * ch + c] - b[x * ch + c]));
            d[x] = peak;
        }
    }
    return out;
}

}  // namespace umbra
