#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "umbra/error.hpp"
#include "umbra/image_io.hpp"
#include "umbra/light_rig.hpp"
#include "umbra/olat.hpp"
#include "umbra/rng.hpp"

using namespace umbra;

namespace {

Vec3 random_unit(Rng& rng) {
    // Marsaglia-style rejection inside the unit ball.
    for (;;) {
        const Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                     rng.uniform(-1.0, 1.0)};
        const double n = v.norm();
        if (n > 1e-3 && n <= 1.0) return v.normalized();
    }
}

}  // namespace

TEST_CASE("synthetic rig matches the published light budget") {
    const LightRig rig = synthetic_rig();
    CHECK(rig.light_count() == 304);
    CHECK(rig.active_count() == 284);
    CHECK_NOTHROW(rig.validate());
    for (const auto& l : rig.lights) CHECK(std::abs(l.dir.norm() - 1.0) <= 1e-9);
}

TEST_CASE("rig json round trip") {
    test::TempDir tmp("rig");
    const LightRig rig = synthetic_rig(64, 4);
    save_rig_json(tmp.path() / "rig.json", rig);
    const LightRig back = load_rig_json(tmp.path() / "rig.json");
    REQUIRE(back.light_count() == rig.light_count());
    CHECK(back.active_count() == rig.active_count());
    for (int i = 0; i < rig.light_count(); ++i) {
        CHECK(back.lights[i].dir.x == rig.lights[i].dir.x);
        CHECK(back.lights[i].active == rig.lights[i].active);
    }
}

TEST_CASE("relight basis and linearity") {
    const LightRig rig = synthetic_rig(32, 2);
    const OlatScan scan = synthetic_scan(rig, 24);

    // One-hot weight returns that OLAT image exactly. Zero stays zero and
    // the unit weight copies, so this is bit-exact.
    WeightVector onehot(scan.images.size(), 0.0);
    onehot[7] = 1.0;
    const ImageBuf img = relight(scan, onehot);
    CHECK(img.data() == scan.images[7].data());

    Rng rng(derive_seed(1, 0, "relight"));
    WeightVector w(scan.images.size());
    for (double& v : w) v = rng.uniform();
    const ImageBuf a = relight(scan, w);
    WeightVector w2 = w;
    for (double& v : w2) v *= 2.0;
    const ImageBuf b = relight(scan, w2);
    for (std::size_t i = 0; i < a.data().size(); ++i)
        CHECK(b.data()[i] == doctest::Approx(2.0f * a.data()[i]).epsilon(1e-6));

    // relight(alpha u + beta v) = alpha relight(u) + beta relight(v).
    WeightVector u(scan.images.size()), v(scan.images.size());
    for (double& x : u) x = rng.uniform();
    for (double& x : v) x = rng.uniform();
    WeightVector mixed(scan.images.size());
    const double alpha = 0.3, beta = 0.7;
    for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] = alpha * u[i] + beta * v[i];
    const ImageBuf lhs = relight(scan, mixed);
    const ImageBuf ru = relight(scan, u);
    const ImageBuf rv = relight(scan, v);
    for (std::size_t i = 0; i < lhs.data().size(); ++i) {
        const double rhs = alpha * ru.data()[i] + beta * rv.data()[i];
        CHECK(lhs.data()[i] ==
              doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("relight equals the brute-force accumulation") {
    const LightRig rig = synthetic_rig(48, 3);
    const OlatScan scan = synthetic_scan(rig, 16);
    Rng rng(derive_seed(2, 0, "relight-oracle"));
    WeightVector w(scan.images.size(), 0.0);
    // Sparse 5-light weight vector.
    for (int k = 0; k < 5; ++k)
        w[rng.uniform_index(w.size())] = rng.uniform(0.1, 1.0);
    const ImageBuf fast = relight(scan, w);
    const ImageBuf slow = test::relight_bruteforce(scan, w);
    for (std::size_t i = 0; i < fast.data().size(); ++i)
        CHECK(fast.data()[i] == doctest::Approx(slow.data()[i]).epsilon(1e-6));
}

TEST_CASE("relight validates weights") {
    const LightRig rig = synthetic_rig(16, 0);
    const OlatScan scan = synthetic_scan(rig, 16);
    CHECK_THROWS_AS(relight(scan, WeightVector(3, 0.1)), DataError);
    WeightVector w(scan.images.size(), 0.1);
    w[0] = -0.5;
    CHECK_THROWS_AS(relight(scan, w), DataError);
}

TEST_CASE("neighbors endpoints and the brute-force oracle") {
    const LightRig rig = synthetic_rig(304, 20);

    const int some_light = rig.active_indices()[17];
    const auto self = neighbors(rig, rig.lights[some_light].dir, 1);
    REQUIRE(self.size() == 1);
    CHECK(self[0] == some_light);

    const auto all = neighbors(rig, Vec3{0, 0, 1}, rig.active_count());
    CHECK(static_cast<int>(all.size()) == rig.active_count());
    CHECK(all == rig.active_indices());

    Rng rng(derive_seed(3, 0, "neighbors"));
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 center = random_unit(rng);
        const int m = 1 + static_cast<int>(rng.uniform_index(40));
        CHECK(neighbors(rig, center, m) == test::neighbors_bruteforce(rig, center, m));
    }

    CHECK_THROWS_AS(neighbors(rig, Vec3{0, 0, 1}, 0), DataError);
    CHECK_THROWS_AS(neighbors(rig, Vec3{0, 0, 1}, rig.active_count() + 1), DataError);
}

TEST_CASE("fill_direction reflects about the camera axis") {
    const Vec3 n{0, 0, 1};

    const Vec3 fixed = fill_direction(n, n);
    CHECK(fixed.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fixed.z == doctest::Approx(1.0).epsilon(1e-12));

    const Vec3 ortho{1, 0, 0};
    const Vec3 flipped = fill_direction(ortho, n);
    CHECK(flipped.x == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(flipped.z == doctest::Approx(0.0).epsilon(1e-12));

    Rng rng(derive_seed(4, 0, "fill"));
    for (int i = 0; i < 10000; ++i) {
        const Vec3 key = random_unit(rng);
        const Vec3 fill = fill_direction(key, n);
        CHECK(std::abs(fill.norm() - 1.0) <= 1e-9);
        CHECK(std::abs(fill.dot(n) - key.dot(n)) <= 1e-9);
        const Vec3 twice = fill_direction(fill, n);
        CHECK(std::abs(twice.x - key.x) <= 1e-9);
        CHECK(std::abs(twice.y - key.y) <= 1e-9);
        CHECK(std::abs(twice.z - key.z) <= 1e-9);
    }

    CHECK_THROWS_AS(fill_direction(Vec3{2, 0, 0}, n), DataError);
    CHECK_THROWS_AS(fill_direction(n, Vec3{0, 0, 0.5}), DataError);
}

TEST_CASE("harsh weights follow the published definition") {
    const LightRig rig = synthetic_rig(304, 20);
    const int key = rig.active_indices()[100];
    const double p_key = 1.1;
    const double eps = 0.005 * p_key;
    const WeightVector w = harsh_weights(rig, key, p_key, eps);
    REQUIRE(static_cast<int>(w.size()) == rig.active_count());

    const int key_slot = rig.slot_of(key);
    for (int s = 0; s < static_cast<int>(w.size()); ++s)
        CHECK(w[s] == (s == key_slot ? p_key : eps));

    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    CHECK(sum == doctest::Approx(p_key + (rig.active_count() - 1) * eps).epsilon(1e-12));

    // Zero ambient is forbidden: shadowed pixels would go fully black.
    CHECK_THROWS_WITH_AS(harsh_weights(rig, key, p_key, 0.0),
                         doctest::Contains("fully black"), DataError);

    // Inactive key light.
    int inactive = -1;
    for (int i = 0; i < rig.light_count(); ++i) {
        if (!rig.lights[i].active) {
            inactive = i;
            break;
        }
    }
    REQUIRE(inactive >= 0);
    CHECK_THROWS_WITH_AS(harsh_weights(rig, inactive, p_key, eps),
                         doctest::Contains("inactive"), DataError);
}

TEST_CASE("soft weights splat the key energy exactly") {
    const LightRig rig = synthetic_rig(304, 20);
    const int key = rig.active_indices()[42];
    const double p_key = 0.93;
    const double eps = 0.005 * p_key;

    for (int m : kLightSizes) {
        const WeightVector w = soft_weights(rig, key, p_key, m, 0.05, eps);
        const auto omega = neighbors(rig, rig.lights[key].dir, m);

        // Ascending-order sum over the splat is exactly p_key.
        double sum = 0.0;
        for (int idx : omega) sum += w[rig.slot_of(idx)];
        CHECK(sum == p_key);

        // m = 5 gives five weights of exactly p_key / 5 up to the final
        // remainder member.
        if (m == 5) {
            for (std::size_t i = 0; i + 1 < omega.size(); ++i)
                CHECK(w[rig.slot_of(omega[i])] == p_key / 5);
            CHECK(w[rig.slot_of(omega.back())] ==
                  doctest::Approx(p_key / 5).epsilon(1e-12));
        }
    }
}

TEST_CASE("soft weights match the piecewise oracle and key wins overlaps") {
    // Small rig so the fill neighborhood must overlap the key's.
    const LightRig rig = synthetic_rig(30, 0);
    const int key = rig.active_indices()[3];
    const double p_key = 1.0;
    const double eps = 0.004;
    const double p_fill = 0.08;
    const int m = 20;

    const WeightVector got =
        soft_weights(rig, key, p_key, m, p_fill, eps, kFillNeighborhood, {20});
    const WeightVector want =
        test::soft_weights_piecewise(rig, key, p_key, m, p_fill, eps, kFillNeighborhood);
    REQUIRE(got.size() == want.size());

    const auto omega_key = neighbors(rig, rig.lights[key].dir, m);
    const auto omega_fill = neighbors(
        rig, fill_direction(rig.lights[key].dir, rig.camera_axis), kFillNeighborhood);
    std::set<int> key_set(omega_key.begin(), omega_key.end());
    bool overlap = false;
    for (int idx : omega_fill) overlap |= key_set.count(idx) > 0;
    REQUIRE(overlap);  // the fixture must actually exercise the overlap

    for (std::size_t s = 0; s < got.size(); ++s)
        CHECK(got[s] == doctest::Approx(want[s]).epsilon(1e-12));
    for (int idx : omega_fill) {
        if (key_set.count(idx))
            CHECK(got[rig.slot_of(idx)] == doctest::Approx(p_key / m).epsilon(1e-12));
    }
}

TEST_CASE("soft weights validate their inputs") {
    const LightRig rig = synthetic_rig(304, 20);
    const int key = rig.active_indices()[0];
    CHECK_THROWS_WITH_AS(soft_weights(rig, key, 1.0, 7, 0.0, 0.005),
                         doctest::Contains("allowed set"), DataError);
    CHECK_THROWS_WITH_AS(soft_weights(rig, key, 1.0, 10, 0.2, 0.005),
                         doctest::Contains("p_fill"), DataError);
    CHECK_THROWS_AS(soft_weights(rig, key, 1.0, 10, 0.05, 0.0), DataError);
}

TEST_CASE("make_pair samples the published knob distributions") {
    const LightRig rig = synthetic_rig(64, 4);
    const OlatScan scan = synthetic_scan(rig, 8);
    FacialPairParams params;

    std::set<int> seen_m;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        // Replaying only the knob draws keeps this loop fast.
        const auto active = rig.active_indices();
        const int key =
            active[Rng(derive_seed(seed, 0, "key")).uniform_index(active.size())];
        const double p_key =
            Rng(derive_seed(seed, 0, "p-key")).uniform(params.p_key_min, params.p_key_max);
        const int m = params.light_sizes[Rng(derive_seed(seed, 0, "light-size"))
                                             .uniform_index(params.light_sizes.size())];
        const double p_fill = std::min(
            Rng(derive_seed(seed, 0, "p-fill")).uniform(0.0, params.p_fill_ratio * p_key),
            p_key / 10.0);
        CHECK(rig.lights[key].active);
        CHECK(p_key >= params.p_key_min);
        CHECK(p_key <= params.p_key_max);
        CHECK((m == 5 || m == 10 || m == 20 || m == 30 || m == 40));
        CHECK(p_fill >= 0.0);
        CHECK(p_fill <= p_key / 10.0);
        seen_m.insert(m);
    }
    CHECK(seen_m.size() == 5);

    // Full renders for a few pairs: determinism and the knob recordings.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const FacialPair a = make_pair(scan, rig, seed, params);
        const FacialPair b = make_pair(scan, rig, seed, params);
        CHECK(a.harsh.data() == b.harsh.data());
        CHECK(a.soft.data() == b.soft.data());
        CHECK(a.m == b.m);
        CHECK(a.p_fill == b.p_fill);
        CHECK(a.harsh.data() != a.soft.data());  // m > 1 always
    }
}

TEST_CASE("zero fill intensity renders the pure key splat") {
    const LightRig rig = synthetic_rig(64, 4);
    const OlatScan scan = synthetic_scan(rig, 16);
    const int key = rig.active_indices()[10];
    const double p_key = 1.0;
    const double eps = 0.005;
    const int m = 10;

    const ImageBuf soft =
        relight(scan, soft_weights(rig, key, p_key, m, 0.0, eps));

    // Independent construction: key splat with the fill ring at its
    // literal weight of zero, ambient elsewhere.
    const auto omega_key = neighbors(rig, rig.lights[key].dir, m);
    const auto omega_fill = neighbors(
        rig, fill_direction(rig.lights[key].dir, rig.camera_axis), kFillNeighborhood);
    WeightVector w(rig.active_count(), eps);
    for (int idx : omega_fill) w[rig.slot_of(idx)] = 0.0;
    double assigned = 0.0;
    for (std::size_t i = 0; i + 1 < omega_key.size(); ++i) {
        w[rig.slot_of(omega_key[i])] = p_key / m;
        assigned += p_key / m;
    }
    w[rig.slot_of(omega_key.back())] = p_key - assigned;

    const ImageBuf expected = relight(scan, w);
    CHECK(soft.data() == expected.data());
}

TEST_CASE("synthetic scan is consistent with its rig") {
    const LightRig rig = synthetic_rig(32, 2);
    const OlatScan scan = synthetic_scan(rig, 24);
    CHECK_NOTHROW(scan.validate(rig));
    CHECK(static_cast<int>(scan.images.size()) == rig.active_count());
    // All images finite, non-negative, and not identical (lighting varies).
    for (const auto& img : scan.images) {
        CHECK(img.all_finite());
        CHECK(img.min_value() >= 0.0f);
    }
    CHECK(scan.images[0].data() != scan.images[5].data());
}

TEST_CASE("scan loading round trip through the index file") {
    test::TempDir tmp("scan");
    const LightRig rig = synthetic_rig(16, 2);
    const OlatScan scan = synthetic_scan(rig, 12);

    nlohmann::json images;
    const auto active = rig.active_indices();
    for (std::size_t i = 0; i < active.size(); ++i) {
        const std::string name = "light_" + std::to_string(active[i]) + ".pfm";
        save_pfm(tmp.path() / name, scan.images[i]);
        images[std::to_string(active[i])] = name;
    }
    std::ofstream(tmp.path() / "index.json")
        << nlohmann::json{{"subject", "fixture"}, {"images", images}}.dump();

    const OlatScan back = load_scan(tmp.path(), rig);
    CHECK(back.subject_id == "fixture");
    REQUIRE(back.images.size() == scan.images.size());
    for (std::size_t i = 0; i < back.images.size(); ++i)
        CHECK(back.images[i].data() == scan.images[i].data());

    // Missing image for an active light.
    std::filesystem::remove(tmp.path() / ("light_" + std::to_string(active[0]) + ".pfm"));
    nlohmann::json broken = images;
    broken.erase(std::to_string(active[0]));
    std::ofstream(tmp.path() / "index.json")
        << nlohmann::json{{"subject", "fixture"}, {"images", broken}}.dump();
    CHECK_THROWS_AS(load_scan(tmp.path(), rig), DataError);
}
