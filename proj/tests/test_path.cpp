#include "doctest.h"

#include "sympidx/index.hpp"
#include "sympidx/path.hpp"

using namespace sympidx;

namespace {

double dist(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("realize examples") {
    auto r = realize(spec::rotation(-1, 1.0));
    CHECK(dist(r.samples().back(), Mat::Identity(2, 2)) < 1e-12);
    CHECK(dist(r.samples().front(), Mat::Identity(2, 2)) == 0.0);
    // z -> e^{-2 pi i t} z at t = 1/4 sends (1, 0) to (0, -1)
    PathEvaluator ev(spec::rotation(-1, 1.0));
    const Mat q = ev(0.25);
    CHECK(q(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(q(1, 0) == doctest::Approx(-1.0));

    auto s = realize(spec::shear(1e-3, 0.5));
    Mat want = Mat::Identity(2, 2);
    want(0, 1) = 0.5e-3;
    CHECK(dist(s.samples().back(), want) < 1e-15);
}

TEST_CASE("iterate group law") {
    auto p = realize(spec::product({spec::rotation(-1, 0.5), spec::shear(-1e-3, 0.5)}));
    const Mat e = p.samples().back();
    Mat ek = Mat::Identity(2, 2);
    for (int k = 1; k <= 5; ++k) {
        ek = ek * e;
        auto pk = iterate(p, k);
        CHECK(pk.duration() == doctest::Approx(0.5 * k));
        CHECK(dist(pk.samples().back(), ek) < 1e-9);
        auto sk = realize(spec::iterate(spec::product({spec::rotation(-1, 0.5), spec::shear(-1e-3, 0.5)}), k));
        CHECK(dist(sk.samples().back(), ek) < 1e-9);
    }
    auto sh2 = iterate(realize(spec::shear(0.3, 1.0)), 2);
    CHECK(sh2.samples().back()(0, 1) == doctest::Approx(0.6));
    auto one = iterate(p, 1);
    CHECK(one.size() == p.size());
}

TEST_CASE("inverse") {
    auto id = inverse(realize(spec::identity(2, 1.0)));
    for (const auto& m : id.samples()) CHECK(dist(m, Mat::Identity(4, 4)) == 0.0);
    auto a = inverse(realize(spec::rotation(0.3, 1.0)));
    auto b = realize(spec::rotation(-0.3, 1.0));
    CHECK(dist(a.samples().back(), b.samples().back()) < 1e-12);
}

TEST_CASE("direct sum endpoint is block diagonal") {
    auto a = spec::rotation(0.4, 1.0);
    auto b = spec::shear(2.0, 1.0);
    auto s = realize(spec::direct_sum({a, b}));
    const Mat e = block_diag({realize(a).samples().back(), realize(b).samples().back()});
    CHECK(dist(s.samples().back(), e) < 1e-12);
    CHECK_THROWS_AS(validate(spec::direct_sum({spec::rotation(1, 1.0), spec::rotation(1, 0.5)})), Error);
}

TEST_CASE("half period extension relation") {
    auto half = realize(spec::product({spec::rotation(-1, 0.5), spec::shear(-1e-3, 0.5)}));
    auto full = half_period_extend(half);
    CHECK(full.duration() == doctest::Approx(1.0));
    const Mat mid = half.samples().back();
    PathEvaluator ev(spec::half_period_extend(spec::product({spec::rotation(-1, 0.5), spec::shear(-1e-3, 0.5)})));
    for (double t : {0.0, 0.1, 0.25, 0.37, 0.5}) CHECK(dist(ev(t + 0.5), ev(t) * mid) < 1e-9);
}

TEST_CASE("loop multiplication") {
    auto c = realize(spec::identity(1, 1.0));
    const int mu0 = cz_index(c);
    CHECK(std::abs(cz_index(loop_multiply(1, c)) - mu0) == 2);
    CHECK(cz_index(loop_multiply(0, c)) == mu0);
    CHECK(dist(loop_multiply(0, c).samples().back(), c.samples().back()) == 0.0);
    // weights summing to zero leave the index unchanged
    auto p = realize(spec::exponential(0.1 * Mat::Identity(4, 4), 1.0));
    CHECK(cz_index(loop_multiply(std::vector<int>{1, -1}, p)) == cz_index(p));
}

TEST_CASE("generator paths refine consistently") {
    Mat a0 = Mat::Zero(4, 4), a1 = Mat::Zero(4, 4);
    a0(0, 0) = 1.0;
    a0(1, 1) = 2.0;
    a0(2, 3) = a0(3, 2) = 0.5;
    a1(0, 2) = a1(2, 0) = 1.5;
    a1(3, 3) = -1.0;
    auto g = spec::generator({a0, a1}, 1.0);
    auto p1 = realize(g, RealizeOptions{256, 0.25, 0.5, 1e-8, {}});
    auto p2 = realize(g, RealizeOptions{512, 0.25, 0.5, 1e-8, {}});
    CHECK(dist(p1.samples().back(), p2.samples().back()) < 1e-8);
    CHECK(p1.has_generator());
    CHECK(symplectic_defect(p1.samples().back()) < 1e-9);
}

TEST_CASE("conjugation preserves the index") {
    Mat c = symplectic_exp(0.3 * Mat::Identity(4, 4) + Mat::Constant(4, 4, 0.1));
    auto p = spec::direct_sum({spec::rotation(1.3, 1.0), spec::shear(0.5, 1.0)});
    CHECK(cz_index(realize(spec::conjugate(c, p))) == cz_index(realize(p)));
}
