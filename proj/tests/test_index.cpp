#include "doctest.h"

#include "sympidx/index.hpp"
#include "sympidx/gallery.hpp"

using namespace sympidx;

namespace {

Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

SymplecticPath p_plus(double sign) { return realize(spec::exponential(diag2(0, sign), 1.0)); }

}  // namespace

TEST_CASE("positive definite generator has index n") {
    for (int n = 1; n <= 3; ++n) {
        Mat q = 0.1 * Mat::Identity(2 * n, 2 * n);
        auto p = realize(spec::exponential(q, 1.0));
        CHECK(cz_index(p) == n);
    }
}

TEST_CASE("constant identity path has index -n") {
    for (int n = 1; n <= 3; ++n) CHECK(cz_index(realize(spec::identity(n, 1.0))) == -n);
}

TEST_CASE("half-turn blocks") {
    const double ep = 1e-3;
    auto r = realize(spec::rotation(-1, 0.5));
    auto s = spec::shear(-ep, 0.5);
    auto pp = realize(spec::product({spec::rotation(-1, 0.5), s}));
    CHECK(cz_index(r) == -1);
    CHECK(cz_index(pp) == -1);
    auto p2 = iterate(pp, 2);
    CHECK(cz_index(p2) == -2);
    auto sp = splitting_numbers(p2, 0.0);
    CHECK(sp.first == 0);
    CHECK(sp.second == 0);
    CHECK(defect(p2) == -1);
    for (int k = 1; k <= 6; ++k) {
        auto sk = iterate(realize(s), k);
        CHECK(cz_index(sk) == 0);
        CHECK(nullity_at(sk, 0.0) == 1);
    }
    CHECK(defect(iterate(realize(s), 2)) == -1);
}

TEST_CASE("mean index examples") {
    CHECK(mean_index(realize(spec::rotation(-1, 1.0))) == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(mean_index(realize(spec::shear(1e-3, 1.0))) == doctest::Approx(0.0).epsilon(1e-9));
    auto ca = circle_action_paths(3, 1e-3);
    CHECK(std::abs(mean_index(ca.phi_half)) < 1e-9);
    // slope of mu(Gamma^k) / k for the rotation
    auto r = realize(spec::rotation(-1, 1.0));
    const int k = 20;
    CHECK(cz_index(iterate(r, k)) / double(k) == doctest::Approx(-2.0).epsilon(2.0 / k));
}

TEST_CASE("bott examples") {
    auto ps = p_plus(1.0);
    for (int j = 1; j < 16; ++j) CHECK(bott(ps, kTwoPi * j / 16) == 0);
    auto ca = circle_action_paths(3, 1e-3);
    CHECK(bott(ca.phi_half, kPi) == -4);
    auto r = realize(spec::rotation(0.37, 1.0));
    CHECK(bott(r, kPi) == cz_index(iterate(r, 2)) - cz_index(r));
}

TEST_CASE("bott plus examples") {
    auto r = realize(spec::rotation(0.37, 1.0));
    CHECK(bott_plus(r, 1.0) == bott(r, 1.0));
    CHECK(bott_plus(realize(spec::identity(1, 1.0)), 0.0) == 1);
    auto ca = circle_action_paths(3, 1e-3);
    CHECK(bott_plus(ca.psi_bar, kPi) == -4);
    CHECK(bott(ca.psi_bar, kPi) == -4);
}

TEST_CASE("splitting number examples") {
    auto p0 = splitting_numbers(realize(spec::identity(1, 1.0)), 0.0);
    CHECK(p0.first == 1);
    CHECK(splitting_numbers(p_plus(1.0), 0.0).first == 0);
    CHECK(splitting_numbers(p_plus(-1.0), 0.0).first == 1);
    auto half = realize(spec::product({spec::rotation(-1, 0.5), spec::shear(-1e-3, 0.5)}));
    auto sp = splitting_numbers(half, kPi);
    CHECK(sp.first == 0);
    CHECK(sp.second == 0);
    auto off = splitting_numbers(realize(spec::rotation(0.37, 1.0)), 1.0);
    CHECK(off.first == 0);
    CHECK(off.second == 0);
}

TEST_CASE("defect and sdc examples") {
    CHECK(defect(realize(spec::identity(2, 1.0))) == 0);
    CHECK(defect(p_plus(1.0)) == -1);
    CHECK(defect(p_plus(-1.0)) == 1);
    auto nd = realize(spec::rotation(0.37, 1.0));
    CHECK(sdc_value(nd) == cz_index(nd));
    auto pos = spec::exponential(0.1 * Mat::Identity(2, 2), 1.0);
    auto qm = spec::exponential(diag2(0, -1.0), 1.0);
    auto both = realize(spec::direct_sum({pos, qm}));
    CHECK(sdc_value(both) == cz_index(both) + 1);
}

TEST_CASE("index report invariants") {
    auto p = realize(spec::direct_sum({spec::shear(0.5, 1.0), spec::rotation(0.5, 1.0), spec::rotation(1.25, 1.0)}));
    auto rep = index_report(p, 32);
    CHECK(rep.mu == rep.bott.at(0.0));
    CHECK(rep.mu_rs - 0.5 * rep.nu_z.at(0.0) == doctest::Approx(rep.mu));
    for (const auto& [z, s] : rep.splitting) {
        CHECK(s.first >= 0);
        CHECK(s.second >= 0);
        CHECK(s.first <= rep.nu_z.at(z));
        CHECK(s.second <= rep.nu_z.at(z));
        CHECK(rep.nu_z.at(z) <= rep.eta_z.at(z));
    }
    const auto prof = bott_profile(p);
    CHECK(prof.mean() == doctest::Approx(rep.mean).epsilon(1e-9));
}
