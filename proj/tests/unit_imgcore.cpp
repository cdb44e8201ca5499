#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "umbra/error.hpp"
#include "umbra/image.hpp"
#include "umbra/image_io.hpp"
#include "umbra/landmarks.hpp"
#include "umbra/rng.hpp"

using namespace umbra;

TEST_CASE("srgb transfer endpoints and midpoint") {
    CHECK(srgb_decode(0.0) == 0.0);
    CHECK(srgb_decode(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(srgb_encode(0.0) == 0.0);
    CHECK(srgb_encode(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // Frozen from direct evaluation of the IEC 61966-2-1 decode formula.
    CHECK(srgb_decode(0.5) == doctest::Approx(test::srgb_decode_oracle(0.5)).epsilon(1e-12));
    CHECK(srgb_decode(0.5) == doctest::Approx(0.21404114048).epsilon(1e-9));
}

TEST_CASE("srgb round trip within 1e-6 and monotone") {
    Rng rng(derive_seed(7, 0, "srgb-roundtrip"));
    double prev_in = -1.0, prev_out = -1.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform();
        const double rt = srgb_encode(srgb_decode(x));
        CHECK(std::abs(rt - x) <= 1e-6);
        if (x > prev_in) {
            CHECK(srgb_decode(x) >= prev_out);
        }
        prev_in = x;
        prev_out = srgb_decode(x);
    }
    // Image-level round trip.
    ImageBuf img(16, 16, 3);
    Rng rng2(derive_seed(7, 1, "srgb-roundtrip"));
    for (float& v : img.data()) v = static_cast<float>(rng2.uniform());
    const ImageBuf rt = linear_to_srgb(srgb_to_linear(img));
    for (std::size_t i = 0; i < img.data().size(); ++i)
        CHECK(std::abs(rt.data()[i] - img.data()[i]) <= 1e-6f);
}

TEST_CASE("srgb_to_linear rejects bad samples") {
    ImageBuf img(2, 2, 3, 0.5f);
    img.at(0, 0, 0) = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_AS(srgb_to_linear(img), DataError);
    img.at(0, 0, 0) = 1.5f;
    CHECK_THROWS_AS(srgb_to_linear(img), DataError);
}

TEST_CASE("resize_crop_face: 256x256 box is an exact copy") {
    ImageBuf img(400, 300, 3);
    Rng rng(derive_seed(11, 0, "crop"));
    for (float& v : img.data()) v = static_cast<float>(rng.uniform());
    const FaceCrop crop{37, 21, 256, 256};
    const ImageBuf out = resize_crop_face(img, crop);
    for (int y = 0; y < 256; ++y)
        for (int x = 0; x < 256; ++x)
            for (int c = 0; c < 3; ++c)
                CHECK(out.at(y, x, c) == img.at(y + 21, x + 37, c));
}

TEST_CASE("resize_crop_face: constant box stays constant") {
    const ImageBuf img = ImageBuf::constant(512, 512, 3, 0.37f);
    const ImageBuf out = resize_crop_face(img, FaceCrop{0, 0, 512, 512});
    for (float v : out.data()) CHECK(v == doctest::Approx(0.37f).epsilon(1e-7));
}

TEST_CASE("resize_crop_face: linear ramp resamples to the same endpoints") {
    // Closed-form oracle: bilinear interpolation of a linear ramp is the
    // ramp itself, so output pixel i must equal the source coordinate it
    // samples, and the endpoints must match the box corners.
    ImageBuf img(512, 512, 3);
    for (int y = 0; y < 512; ++y)
        for (int x = 0; x < 512; ++x)
            for (int c = 0; c < 3; ++c) img.at(y, x, c) = static_cast<float>(x) / 511.0f;
    const ImageBuf out = resize_crop_face(img, FaceCrop{0, 0, 512, 512});
    CHECK(out.at(0, 0, 0) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(out.at(128, 255, 0) == doctest::Approx(1.0).epsilon(1e-6));
    for (int x = 0; x < 256; ++x) {
        const double expected = (x * 511.0 / 255.0) / 511.0;
        CHECK(out.at(77, x, 1) == doctest::Approx(expected).epsilon(1e-5));
    }
}

TEST_CASE("resize_crop_face: out-of-bounds boxes name the violated bound") {
    const ImageBuf img(100, 100, 3, 0.0f);
    CHECK_THROWS_WITH_AS(resize_crop_face(img, FaceCrop{60, 0, 50, 50}),
                         doctest::Contains("right edge"), DataError);
    CHECK_THROWS_WITH_AS(resize_crop_face(img, FaceCrop{0, 70, 50, 50}),
                         doctest::Contains("bottom edge"), DataError);
    CHECK_THROWS_AS(resize_crop_face(img, FaceCrop{-1, 0, 50, 50}), DataError);
}

TEST_CASE("pfm round trip is bit exact") {
    test::TempDir tmp("pfm");
    ImageBuf mask(33, 17, 3);
    Rng rng(derive_seed(3, 0, "pfm"));
    for (float& v : mask.data()) v = static_cast<float>(rng.uniform());
    const auto path = tmp.path() / "mask.pfm";
    save_pfm(path, mask);
    const ImageBuf back = load_pfm(path);
    REQUIRE(back.same_shape(mask));
    CHECK(back.data() == mask.data());

    // 1-channel variant.
    ImageBuf gray(9, 5, 1);
    for (float& v : gray.data()) v = static_cast<float>(rng.uniform());
    save_pfm(tmp.path() / "gray.pfm", gray);
    CHECK(load_pfm(tmp.path() / "gray.pfm").data() == gray.data());
}

TEST_CASE("png 16-bit round trip within quantization") {
    test::TempDir tmp("png16");
    ImageBuf img(21, 13, 3);
    Rng rng(derive_seed(5, 0, "png16"));
    for (float& v : img.data()) v = static_cast<float>(rng.uniform());
    const auto path = tmp.path() / "img.png";
    save_png16(path, img);
    const ImageBuf back = load_png(path);
    REQUIRE(back.same_shape(img));
    for (std::size_t i = 0; i < img.data().size(); ++i)
        CHECK(std::abs(back.data()[i] - img.data()[i]) <= 0.5f / 65535.0f + 1e-7f);
}

TEST_CASE("png 8-bit round trip within quantization") {
    test::TempDir tmp("png8");
    ImageBuf img(8, 8, 3);
    Rng rng(derive_seed(5, 1, "png8"));
    for (float& v : img.data()) v = static_cast<float>(rng.uniform());
    const auto path = tmp.path() / "img8.png";
    save_png8(path, img);
    const ImageBuf back = load_png(path);
    for (std::size_t i = 0; i < img.data().size(); ++i)
        CHECK(std::abs(back.data()[i] - img.data()[i]) <= 0.5f / 255.0f + 1e-7f);
}

TEST_CASE("png loader rejects garbage") {
    test::TempDir tmp("pngbad");
    const auto path = tmp.path() / "bad.png";
    std::ofstream(path) << "this is not a png";
    CHECK_THROWS_AS(load_png(path), DataError);
    CHECK_THROWS_AS(load_png(tmp.path() / "missing.png"), DataError);
}

TEST_CASE("crop json round trip") {
    test::TempDir tmp("crop");
    const FaceCrop crop{12, 34, 256, 300};
    save_crop_json(tmp.path() / "c.json", crop);
    const FaceCrop back = load_crop_json(tmp.path() / "c.json");
    CHECK(back.x == crop.x);
    CHECK(back.y == crop.y);
    CHECK(back.w == crop.w);
    CHECK(back.h == crop.h);
}

TEST_CASE("landmark mirror involution is enforced") {
    LandmarkSet lm = test::symmetric_grid_landmarks(4, 3, 50.0, 10.0, 20.0, 15.0);
    CHECK_NOTHROW(lm.validate_mirror());

    lm.mirror[0] = 1;  // break the involution
    CHECK_THROWS_WITH_AS(lm.validate_mirror(), doctest::Contains("involution"), DataError);

    lm.mirror[0] = 99;
    CHECK_THROWS_AS(lm.validate_mirror(), DataError);
}

TEST_CASE("landmark bounds validation") {
    LandmarkSet lm = test::symmetric_grid_landmarks(4, 3, 50.0, 10.0, 20.0, 15.0);
    CHECK_NOTHROW(lm.validate_bounds(256, 256));
    CHECK_THROWS_AS(lm.validate_bounds(40, 256), DataError);
}

TEST_CASE("landmark json round trip enforces the 468-vertex format") {
    test::TempDir tmp("lmjson");
    // 468 = 2 * 234: symmetric grid with 26 columns x 18 rows.
    LandmarkSet lm = test::symmetric_grid_landmarks(26, 18, 128.0, 4.0, 30.0, 11.0);
    REQUIRE(lm.size() == kLandmarkCount);
    const auto path = tmp.path() / "lm.json";
    save_landmarks_json(path, lm);
    const LandmarkSet back = load_landmarks_json(path);
    CHECK(back.points == lm.points);
    CHECK(back.mirror == lm.mirror);

    // Wrong count is rejected.
    LandmarkSet small = test::symmetric_grid_landmarks(4, 3, 50.0, 10.0, 20.0, 15.0);
    save_landmarks_json(tmp.path() / "small.json", small);
    CHECK_THROWS_AS(load_landmarks_json(tmp.path() / "small.json"), DataError);
}

TEST_CASE("mask range check helpers") {
    ImageBuf ok(4, 4, 3, 0.5f);
    CHECK(in_unit_range(ok));
    ok.at(1, 1, 1) = 1.25f;
    CHECK_FALSE(in_unit_range(ok));
    const ImageBuf clamped = clamp01(ok);
    CHECK(in_unit_range(clamped));
    CHECK(clamped.at(1, 1, 1) == 1.0f);
}
