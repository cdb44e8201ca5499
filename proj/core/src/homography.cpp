#include "umbra/homography.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "umbra/error.hpp"
#include "umbra/metrics.hpp"

namespace umbra {

std::pair<double, double> Homography::apply(double x, double y) const {
    const double w = h[2][0] * x + h[2][1] * y + h[2][2];
    return {(h[0][0] * x + h[0][1] * y + h[0][2]) / w,
            (h[1][0] * x + h[1][1] * y + h[1][2]) / w};
}

double Homography::determinant() const {
    return h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) -
           h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
           h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
}

Homography Homography::inverse() const {
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = h[r][c];
    if (std::abs(m.determinant()) < 1e-12)
        throw DataError("homography: singular matrix has no inverse");
    const Eigen::Matrix3d inv = m.inverse();
    Homography out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out.h[r][c] = inv(r, c) / inv(2, 2);
    return out;
}

namespace {

struct Normalizer {
    double cx = 0.0, cy = 0.0, scale = 1.0;

    std::pair<double, double> apply(double x, double y) const {
        return {(x - cx) * scale, (y - cy) * scale};
    }
};

Normalizer fit_normalizer(const std::vector<Correspondence>& pairs, bool source) {
    Normalizer n;
    for (const auto& p : pairs) {
        n.cx += source ? p.x1 : p.x2;
        n.cy += source ? p.y1 : p.y2;
    }
    n.cx /= pairs.size();
    n.cy /= pairs.size();
    double mean_dist = 0.0;
    for (const auto& p : pairs) {
        const double dx = (source ? p.x1 : p.x2) - n.cx;
        const double dy = (source ? p.y1 : p.y2) - n.cy;
        mean_dist += std::sqrt(dx * dx + dy * dy);
    }
    mean_dist /= pairs.size();
    n.scale = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;
    return n;
}

}  // namespace

DltResult dlt_homography(const std::vector<Correspondence>& pairs) {
    if (pairs.size() < 4)
        throw DataError("dlt_homography: need at least 4 correspondences, got " +
                        std::to_string(pairs.size()));
    for (const auto& p : pairs) {
        if (!std::isfinite(p.x1) || !std::isfinite(p.y1) || !std::isfinite(p.x2) ||
            !std::isfinite(p.y2))
            throw DataError("dlt_homography: non-finite correspondence");
    }

    const Normalizer ns = fit_normalizer(pairs, true);
    const Normalizer nd = fit_normalizer(pairs, false);

    Eigen::MatrixXd a(2 * pairs.size(), 9);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [x, y] = ns.apply(pairs[i].x1, pairs[i].y1);
        const auto [u, v] = nd.apply(pairs[i].x2, pairs[i].y2);
        a.row(2 * i) << -x, -y, -1, 0, 0, 0, u * x, u * y, u;
        a.row(2 * i + 1) << 0, 0, 0, -x, -y, -1, v * x, v * y, v;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    // Rank < 8 means the system does not pin down a homography (collinear
    // or coincident points).
    if (sv(7) < 1e-9 * sv(0))
        throw DataError("dlt_homography: degenerate configuration (collinear or "
                        "coincident correspondences)");

    const Eigen::VectorXd hvec = svd.matrixV().col(8);
    Eigen::Matrix3d hn;
    hn << hvec(0), hvec(1), hvec(2), hvec(3), hvec(4), hvec(5), hvec(6), hvec(7), hvec(8);

    // Undo the normalization: H = Td^-1 * Hn * Ts.
    Eigen::Matrix3d ts, td;
    ts << ns.scale, 0, -ns.scale * ns.cx, 0, ns.scale, -ns.scale * ns.cy, 0, 0, 1;
    td << nd.scale, 0, -nd.scale * nd.cx, 0, nd.scale, -nd.scale * nd.cy, 0, 0, 1;
    Eigen::Matrix3d hm = td.inverse() * hn * ts;

    if (std::abs(hm(2, 2)) < 1e-14 || std::abs(hm.determinant()) < 1e-14)
        throw DataError("dlt_homography: estimated matrix is singular");
    hm /= hm(2, 2);

    DltResult result;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) result.homography.h[r][c] = hm(r, c);

    double se = 0.0;
    for (const auto& p : pairs) {
        const auto [px, py] = result.homography.apply(p.x1, p.y1);
        se += (px - p.x2) * (px - p.x2) + (py - p.y2) * (py - p.y2);
    }
    result.reprojection_rms = std::sqrt(se / pairs.size());
    return result;
}

ImageBuf warp_homography(const ImageBuf& img, const Homography& h) {
    const Homography inv = h.inverse();
    ImageBuf out(img.width(), img.height(), img.channels());
    for (int y = 0; y < img.height(); ++y) {
        float* row = out.row(y);
        for (int x = 0; x < img.width(); ++x) {
            const auto [sx, sy] = inv.apply(x, y);
            for (int c = 0; c < img.channels(); ++c)
                row[x * img.channels() + c] = sample_bilinear(img, sx, sy, c);
        }
    }
    return out;
}

int select_counterpart(const ImageBuf& shadowed, const std::vector<ImageBuf>& candidates,
                       const std::vector<std::vector<Correspondence>>& correspondences) {
    if (candidates.empty()) throw DataError("select_counterpart: empty candidate list");
    if (correspondences.size() != candidates.size())
        throw DataError("select_counterpart: correspondence list count does not match "
                        "candidate count");

    int best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const DltResult dlt = dlt_homography(correspondences[i]);
        const ImageBuf aligned = warp_homography(shadowed, dlt.homography);
        const double err = l1_pixel(aligned, candidates[i]);
        if (err < best_err) {
            best_err = err;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<Correspondence> load_correspondences_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_correspondences_json: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
        std::vector<Correspondence> pairs;
        for (const auto& entry : doc) {
            pairs.push_back({entry.at(0).at(0).get<double>(), entry.at(0).at(1).get<double>(),
                             entry.at(1).at(0).get<double>(), entry.at(1).at(1).get<double>()});
        }
        return pairs;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_correspondences_json: " + path.string() + ": " + e.what());
    }
}

}  // namespace umbra
