#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "psl/features.hpp"
#include "psl/imaging.hpp"
#include "synthetic.hpp"

using namespace psl;

namespace {

RasterImage flat(int w, int h, double r, double g, double b) {
    RasterImage img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) img.set_pixel(x, y, r, g, b);
    return img;
}

BinaryMask right_triangle(int w, int h, int x0, int y0, int leg) {
    BinaryMask m(w, h);
    for (int j = 0; j < leg; ++j)
        for (int i = 0; i < leg - j; ++i) m(x0 + i, y0 + j) = 1;
    return m;
}

BinaryMask star(int w, int h, int spikes, double r0, double amp) {
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = x - w / 2.0, dy = y - h / 2.0;
            if (std::hypot(dx, dy) <= r0 * (1 + amp * std::cos(spikes * std::atan2(dy, dx)))) m(x, y) = 1;
        }
    return m;
}

std::vector<Pixel> to_pixels(const std::vector<oracle::Px>& v) {
    std::vector<Pixel> out;
    for (const auto& p : v) out.push_back({p.x, p.y});
    return out;
}

}  // namespace

TEST_CASE("feature names are unique and ordered") {
    const auto& n = FeatureVector::names();
    CHECK(n.front() == "A1");
    CHECK(n[5] == "B1");
    CHECK(n[12] == "C1");
    CHECK(n[36] == "T1");
    CHECK(n.back() == "T23");
    CHECK(FeatureVector::index_of("B7") == 11);
    CHECK_THROWS(FeatureVector::index_of("Z9"));
}

TEST_CASE("shape asymmetry of a centred disk and a rectangle") {
    const BinaryMask d = synth::disk(160, 160, 80, 80, 50);
    for (double v : shape_asymmetry(d)) CHECK(v >= 0.98);
    const BinaryMask r = synth::rect(100, 80, 20, 30, 69, 49);
    for (double v : shape_asymmetry(r)) CHECK(v >= 0.98);
}

TEST_CASE("shape asymmetry of a right triangle equals the reflect-and-count oracle") {
    const BinaryMask t = right_triangle(80, 80, 10, 12, 50);
    const auto lib = shape_asymmetry(t);
    const auto ref = oracle::shape_asymmetry(t);
    for (int i = 0; i < 3; ++i) CHECK(lib[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK(lib[0] < 0.9);
}

TEST_CASE("colour asymmetry") {
    const BinaryMask m = synth::rect(60, 40, 10, 10, 49, 29);
    CHECK(color_asymmetry(flat(60, 40, 120, 80, 60), m) == std::array<double, 2>{0.0, 0.0});

    RasterImage two = flat(60, 40, 200, 100, 50);
    for (int y = 0; y < 40; ++y)
        for (int x = 30; x < 60; ++x) two.set_pixel(x, y, 50, 200, 100);
    const auto a = color_asymmetry(two, m);
    CHECK(a[0] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(0.0));

    CHECK(chi_square_distance({1, 0}, {0, 1}) == 2.0);
    CHECK(chi_square_distance({0.5, 0.5}, {0.5, 0.5}) == 0.0);
}

TEST_CASE("colour asymmetry of a red/blue split equals the bin-by-bin oracle") {
    synth::Engine rng(6);
    RasterImage img = synth::random_texture(rng, 70, 50);
    for (int y = 0; y < 50; ++y)
        for (int x = 0; x < 35; ++x) img.at(x, y, 0) = std::min(255.0, img.at(x, y, 0) + 60);
    const BinaryMask m = synth::random_blob(rng, 70, 50);
    const auto lib = color_asymmetry(img, m);
    const auto ref = oracle::features(img, m);
    CHECK(lib[0] == doctest::Approx(ref[3]).epsilon(1e-9));
    CHECK(lib[1] == doctest::Approx(ref[4]).epsilon(1e-9));
}

TEST_CASE("border geometry baselines") {
    const auto d = border_geometry(synth::disk(160, 160, 80, 80, 50));
    CHECK(d[0] >= 0.95);
    CHECK(d[0] <= 1.15);
    CHECK(d[1] < 0.01);
    CHECK(d[2] > 0.97);

    const auto s = border_geometry(synth::rect(100, 100, 20, 20, 79, 79));
    CHECK(std::abs(s[0] - 4 / std::numbers::pi) <= 0.08 * 4 / std::numbers::pi);
    CHECK(s[2] == 1.0);
}

TEST_CASE("radial variance of a 2:1 rectangle equals the boundary enumeration") {
    const BinaryMask m = synth::rect(100, 60, 10, 10, 69, 39);
    const auto bnd = oracle::boundary(m);
    const double cx = 39.5, cy = 24.5;
    double mean = 0, sq = 0;
    for (const auto& p : bnd) mean += std::hypot(p.x - cx, p.y - cy) / bnd.size();
    for (const auto& p : bnd) sq += std::pow(std::hypot(p.x - cx, p.y - cy) - mean, 2) / bnd.size();
    CHECK(border_geometry(m)[1] == doctest::Approx(sq / (mean * mean)).epsilon(1e-12));
}

TEST_CASE("tiny masks use the documented fallback") {
    BinaryMask m(5, 5);
    m(2, 2) = 1;
    Diagnostics diag;
    CHECK(border_geometry(m, &diag) == std::array<double, 3>{1.0, 0.0, 1.0});
    CHECK_FALSE(diag.messages.empty());
    CHECK_THROWS_AS(border_geometry(BinaryMask(5, 5)), InvalidInput);
}

TEST_CASE("box-counting dimension") {
    std::vector<Pixel> line;
    for (int x = 0; x < 256; ++x) line.push_back({x, 40});
    const double dl = fractal_dimension(line);
    CHECK(dl >= 0.9);
    CHECK(dl <= 1.1);

    std::vector<Pixel> outline;
    for (int i = 0; i < 200; ++i) {
        outline.push_back({i, 0});
        outline.push_back({i, 199});
        outline.push_back({0, i});
        outline.push_back({199, i});
    }
    const double ds = fractal_dimension(outline);
    CHECK(ds >= 0.9);
    CHECK(ds <= 1.1);

    std::vector<Pixel> one{{3, 3}};
    Diagnostics diag;
    CHECK(fractal_dimension(one, &diag) == 0.0);
    CHECK_FALSE(diag.messages.empty());
}

TEST_CASE("zigzag coastline has dimension between 1 and 2 and matches the second counter") {
    std::mt19937_64 rng(77);
    std::vector<oracle::Px> coast;
    int y = 128;
    for (int x = 0; x < 256; ++x) {
        const int step = static_cast<int>(rng() % 41) - 20;
        const int ny = std::clamp(y + step, 0, 255);
        for (int k = std::min(y, ny); k <= std::max(y, ny); ++k) coast.push_back({x, k});
        y = ny;
    }
    const double lib = fractal_dimension(to_pixels(coast));
    CHECK(lib > 1.0);
    CHECK(lib < 2.0);
    CHECK(lib == doctest::Approx(oracle::box_dimension(coast)).epsilon(1e-12));
}

TEST_CASE("pigmentation transition") {
    const BinaryMask m = synth::disk(120, 120, 60, 60, 40);
    CHECK(pigmentation_transition(flat(120, 120, 90, 90, 90), m) == std::array<double, 2>{0.0, 0.0});

    RasterImage step = flat(120, 120, 220, 200, 190);
    for (int y = 0; y < 120; ++y)
        for (int x = 0; x < 120; ++x)
            if (m(x, y)) step.set_pixel(x, y, 100, 70, 60);
    const auto e = pigmentation_transition(step, m);
    CHECK(e[0] > 0);
    CHECK(std::sqrt(e[1]) < 0.3 * e[0]);

    RasterImage ramp(120, 120);
    for (int y = 0; y < 120; ++y)
        for (int x = 0; x < 120; ++x)
            m(x, y) ? ramp.set_pixel(x, y, 80, 60, 50) : ramp.set_pixel(x, y, 100 + x, 90 + x, 80 + y);
    const auto r = pigmentation_transition(ramp, m);
    const auto ref = oracle::features(ramp, m);
    CHECK(r[0] == doctest::Approx(ref[8]).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(ref[9]).epsilon(1e-9));
}

TEST_CASE("stationary point counting") {
    std::vector<double> f;
    for (int k = 0; k < 200; ++k) f.push_back(std::sin(4 * 2 * std::numbers::pi * k / 200));
    CHECK(count_stationary_points(f, 5) == 8);
    CHECK(count_stationary_points(std::vector<double>(50, 1.0), 5) == 0);
    CHECK(jaworek_window(40) == 5);
    CHECK(jaworek_window(400) == 20);
}

TEST_CASE("contour irregularity of disk, rectangle and star") {
    CHECK(jaworek_irregularity(synth::disk(160, 160, 80, 80, 50)) == 8);
    CHECK(jaworek_irregularity(synth::rect(120, 80, 10, 20, 99, 59)) <= 4);
    CHECK(jaworek_irregularity(star(200, 200, 5, 60, 0.4)) >= 10);
}

TEST_CASE("contour irregularity matches the trace oracle on random blobs") {
    synth::Engine rng(88);
    for (int t = 0; t < 8; ++t) {
        const BinaryMask m = synth::random_blob(rng, 80, 60);
        if (count_foreground(m) < 20) continue;
        CHECK(jaworek_irregularity(m) == oracle::jaworek(m));
    }
}

TEST_CASE("colour statistics") {
    const BinaryMask m = synth::rect(20, 20, 0, 0, 19, 19);
    const auto c = histogram_color_stats(flat(20, 20, 51, 51, 51), m);
    CHECK(c[0] == doctest::Approx(0.2));
    CHECK(c[1] == doctest::Approx(0.0));
    CHECK(c[2] == doctest::Approx(0.0));

    RasterImage two = flat(20, 20, 51, 51, 51);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 20; ++x) two.set_pixel(x, y, 204, 204, 204);
    const auto t = histogram_color_stats(two, m);
    CHECK(t[0] == doctest::Approx(0.5));
    CHECK(t[1] == doctest::Approx(0.09));
    CHECK(std::abs(t[2]) < 1e-12);

    // Skewed mix of three values, compared with moments over the pixel list.
    RasterImage mix = flat(20, 20, 30, 60, 90);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
            if (y < 3) mix.set_pixel(x, y, 240.4, 10.2, 90);
            else if (y < 8) mix.set_pixel(x, y, 120.7, 60, 15.3);
    const auto s = histogram_color_stats(mix, m);
    for (int ch = 0; ch < 3; ++ch) {
        double mean = 0, var = 0, sk = 0;
        for (int y = 0; y < 20; ++y)
            for (int x = 0; x < 20; ++x) mean += mix.at(x, y, ch) / 255.0 / 400;
        for (int y = 0; y < 20; ++y)
            for (int x = 0; x < 20; ++x) {
                const double d = mix.at(x, y, ch) / 255.0 - mean;
                var += d * d / 400;
                sk += d * d * d / 400;
            }
        const double bin = 1.0 / 255;
        CHECK(std::abs(s[3 * ch] - mean) <= bin);
        CHECK(std::abs(s[3 * ch + 1] - var) <= 2 * bin * std::sqrt(var) + bin * bin);
        CHECK(std::abs(s[3 * ch + 2] - sk) <= 3 * bin * var + 1e-6);
    }
}

TEST_CASE("colour variegation") {
    const BinaryMask m = synth::rect(20, 20, 0, 0, 19, 19);
    const auto c = color_variegation(flat(20, 20, 80, 80, 80), m);
    CHECK(c[0] == doctest::Approx(std::log(1e-9)));
    CHECK(c[0] == doctest::Approx(-20.7233).epsilon(1e-5));

    RasterImage two = flat(20, 20, 51, 0, 0);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 20; ++x) two.set_pixel(x, y, 77, 0, 0);
    const auto v = color_variegation(two, m);
    const double mean = 64.0 / 255, var = std::pow(13.0 / 255, 2);
    CHECK(v[0] == doctest::Approx(std::log(var / mean)).epsilon(1e-12));
    CHECK(std::abs(v[0] - std::log(0.01)) < 0.05);
    Diagnostics diag;
    color_variegation(flat(20, 20, 0, 0, 0), m, &diag);
    CHECK_FALSE(diag.messages.empty());
}

TEST_CASE("full vector: length, finiteness, uniform disk") {
    RasterImage img = flat(160, 160, 220, 190, 170);
    const BinaryMask m = synth::disk(160, 160, 80, 80, 50);
    for (int y = 0; y < 160; ++y)
        for (int x = 0; x < 160; ++x)
            if (m(x, y)) img.set_pixel(x, y, 120, 80, 60);
    const FeatureVector f = extract_feature_vector(img, m);
    CHECK(f.values.size() == 59);
    for (double v : f.values) CHECK(std::isfinite(v));
    CHECK(f.at("A1") > 0.98);
    CHECK(f.at("B1") == doctest::Approx(1.0).epsilon(0.15));
    CHECK(f.at("B3") < 0.01);
    for (const char* n : {"C2", "C3", "C5", "C6", "C8", "C9"}) CHECK(f.at(n) == 0.0);
}

TEST_CASE("full vector equals the composed oracle on a synthetic lesion") {
    synth::Engine rng(123);
    const synth::Lesion l = synth::make_lesion(rng, 2);
    const FeatureVector f = extract_feature_vector(l.image, l.truth);
    const auto ref = oracle::features(l.image, l.truth);
    for (std::size_t i = 0; i < 59; ++i) {
        INFO(FeatureVector::names()[i]);
        CHECK(f.values[i] == doctest::Approx(ref[i]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("feature CSV") {
    std::ostringstream os;
    write_feature_csv_header(os);
    FeatureVector f;
    f.values[0] = 0.5;
    write_feature_csv_row(os, "a.png", f);
    const std::string s = os.str();
    CHECK(s.rfind("id,A1,A2", 0) == 0);
    CHECK(s.find("\na.png,0.5,0,") != std::string::npos);
    CHECK(format_number(0.1) == "0.1");
}
