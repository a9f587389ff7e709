#include "doctest.h"

#include "sympidx/core.hpp"
#include "sympidx/index.hpp"
#include "sympidx/suites.hpp"

using namespace sympidx;

namespace {

Mat q_plus() {
    Mat q = Mat::Zero(2, 2);
    q(1, 1) = 1.0;  // p^2 / 2 as a quadratic form
    return q;
}

}  // namespace

TEST_CASE("standard structure") {
    const Mat j = standard_j(2);
    CHECK((j * j + Mat::Identity(4, 4)).norm() == doctest::Approx(0.0));
    CHECK(j(1, 0) == 1.0);
    CHECK(j(0, 1) == -1.0);
}

TEST_CASE("symplectic exponential and inverse") {
    Rng rng(3);
    for (int d = 1; d <= 4; ++d) {
        const Mat m = random_symplectic(rng, d, 0.5);
        CHECK(symplectic_defect(m) < 1e-10);
        CHECK((symplectic_inverse(m) * m - Mat::Identity(2 * d, 2 * d)).norm() < 1e-10);
    }
    CHECK_THROWS_AS(SymplecticMatrix(2.0 * Mat::Identity(2, 2)), Error);
}

TEST_CASE("circle spectrum examples") {
    auto id = circle_spectrum(SymplecticMatrix(Mat::Identity(2, 2)));
    REQUIRE(id.points.size() == 1);
    CHECK(id.points[0].angle == doctest::Approx(0.0));
    CHECK(id.points[0].nu == 2);
    CHECK(id.points[0].eta == 2);

    Mat sh = Mat::Identity(2, 2);
    sh(0, 1) = 1.0;
    auto s = circle_spectrum(SymplecticMatrix(sh));
    REQUIRE(s.points.size() == 1);
    CHECK(s.points[0].nu == 1);
    CHECK(s.points[0].eta == 2);

    auto r = circle_spectrum(SymplecticMatrix(rotation2(kPi)));
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].angle == doctest::Approx(kPi));
    CHECK(r.points[0].nu == 2);
    CHECK(r.points[0].eta == 2);
}

TEST_CASE("circle spectrum is mirror symmetric") {
    Rng rng(11);
    for (int c = 0; c < 20; ++c) {
        std::vector<Mat> blocks;
        for (int i = 0; i < 3; ++i) blocks.push_back(rotation2(std::uniform_real_distribution<double>(0.1, 3.0)(rng)));
        const Mat c0 = random_symplectic(rng, 3, 0.3);
        const Mat m = c0 * block_diag(blocks) * symplectic_inverse(c0);
        const auto sp = circle_spectrum(SymplecticMatrix(m, 1e-6));
        for (const auto& p : sp.points) {
            const double mirror = p.angle == 0 ? 0 : kTwoPi - p.angle;
            CHECK(sp.nu_at(mirror, 1e-6) == p.nu);
        }
    }
}

TEST_CASE("nullity of powers follows the roots") {
    Rng rng(5);
    for (int c = 0; c < 20; ++c) {
        std::vector<Mat> blocks;
        for (int i = 0; i < 2; ++i) {
            const int q = std::uniform_int_distribution<int>(1, 6)(rng);
            const int p = std::uniform_int_distribution<int>(0, q - 1)(rng);
            blocks.push_back(rotation2(kTwoPi * p / q));
        }
        const Mat m = block_diag(blocks);
        for (int k = 1; k <= 6; ++k) {
            Mat mk = Mat::Identity(4, 4);
            for (int i = 0; i < k; ++i) mk = mk * m;
            int sum = 0;
            for (int j = 0; j < k; ++j) sum += nullity(m, std::polar(1.0, kTwoPi * j / k));
            CHECK(nullity(mk, 1.0) == sum);
        }
    }
}

TEST_CASE("normal form examples") {
    auto plus = eigen1_normal_form(SymplecticMatrix(symplectic_exp(q_plus())));
    CHECK(plus.b_plus == 1);
    CHECK(plus.b_minus == 0);
    CHECK(plus.b_0 == 0);

    auto minus = eigen1_normal_form(SymplecticMatrix(symplectic_exp(-q_plus())));
    CHECK(minus.b_plus == 0);
    CHECK(minus.b_minus == 1);

    auto id = eigen1_normal_form(SymplecticMatrix(Mat::Identity(4, 4)));
    CHECK(id.b_id == 2);
    CHECK(id.b_0 + id.b_plus + id.b_minus == 0);

    CHECK(eigen1_normal_form(SymplecticMatrix(rotation2(1.0))).dim_v == 0);
}

TEST_CASE("normal form agrees with the defect identity") {
    for (double sign : {1.0, -1.0}) {
        auto p = realize(spec::exponential(sign * q_plus(), 1.0));
        auto nf = eigen1_normal_form(p.endpoint());
        CHECK(nf.b_minus - nf.b_plus == defect(p));
    }
    Rng rng(21);
    RandomSpecOptions opt;
    opt.max_dim_half = 3;
    opt.allow_ode = false;
    int checked = 0;
    for (int c = 0; c < 40; ++c) {
        auto p = random_path(rng, 2, opt, RealizeOptions{256, 0.25, 0.5, 1e-8, {}}, {}, {0.0}, nullptr);
        if (nullity_at(p, 0.0) == 0) continue;
        try {
            auto nf = eigen1_normal_form(p.endpoint());
            CHECK(nf.b_minus - nf.b_plus == defect(p));
            ++checked;
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NotTotallyDegenerateBlock);
        }
    }
    CHECK(checked > 5);
}
