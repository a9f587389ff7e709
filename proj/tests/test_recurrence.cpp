#include "doctest.h"

#include "sympidx/recurrence.hpp"

#include <cmath>

using namespace sympidx;

namespace {

// mu of the m-th iterate of the rotation with weight w over [0, 1]
int rotation_mu(double w, int m) {
    const double x = w * m;
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-12) return 2 * static_cast<int>(r) - 1;
    return 2 * static_cast<int>(std::floor(x)) + 1;
}

}  // namespace

TEST_CASE("rotation iterates follow the closed form") {
    auto r = realize(spec::rotation(1.0, 1.0));
    for (int m = 1; m <= 50; m += 7) CHECK(cz_index(iterate(r, m)) == 2 * m - 1);
    auto path = irt_path(r);
    for (int m = 1; m <= 50; ++m) CHECK(path.mu(m) == 2 * m - 1);
    CHECK(path.mu(-2) == -(path.mu(2) + path.nu(2)));
}

TEST_CASE("single path certificates") {
    auto path = irt_path(realize(spec::rotation(1.0, 1.0)));
    for (int N : {1, 2, 3}) {
        for (int k = N; k <= 5 * N; k += N) {
            IRTCertificate c{2 * k, {k}, 0.5, 2, N};
            // k - l must stay a positive iterate
            CHECK(verify_irt({path}, c).passed == (k > 2));
        }
    }
    IRTCertificate odd{3, {3}, 0.5, 1, 1};
    auto led = verify_irt({path}, odd);
    CHECK_FALSE(led.precheck);
    CHECK_FALSE(led.passed);
}

TEST_CASE("finder matches an exhaustive enumeration") {
    const double w = 0.7;
    auto path = irt_path(realize(spec::rotation(w, 1.0)));
    auto cert = find_irt({path}, 0.5, 1, 1, 10000);
    REQUIRE(cert);
    int best = -1;
    for (int d = 2; d < 200 && best < 0; d += 2) {
        for (int k = 1; k <= 400; ++k) {
            if (std::abs(2 * w * k - d) >= 0.5) continue;
            // the endpoint is nondegenerate, so b+- vanish
            const bool ii = rotation_mu(w, k + 1) == d + rotation_mu(w, 1);
            const bool iii = rotation_mu(w, k - 1) == d - rotation_mu(w, 1);
            if (ii && iii) {
                best = d;
                break;
            }
        }
    }
    CHECK(cert->d == best);
    CHECK(verify_irt({path}, *cert).passed);
}

TEST_CASE("finder round trips") {
    std::vector<IRTPath> pair{irt_path(realize(spec::rotation(1.0, 1.0))), irt_path(realize(spec::rotation(2.0, 1.0)))};
    auto cert = find_irt(pair, 0.5, 3, 4, 10000);
    REQUIRE(cert);
    CHECK(cert->d % 4 == 0);
    for (int k : cert->k) CHECK(k % 4 == 0);
    CHECK(verify_irt(pair, *cert).passed);

    auto half = spec::product({spec::rotation(-1, 0.5), spec::shear(-1e-3, 0.5)});
    auto g = loop_multiply(2, realize(spec::half_period_extend(half)));
    REQUIRE(mean_index(g) > 0);
    std::vector<IRTPath> one{irt_path(g)};
    auto c2 = find_irt(one, 0.5, 2, 2, 10000);
    REQUIRE(c2);
    const auto led = verify_irt(one, *c2);
    CHECK(led.passed);
    CHECK(led.route2_agrees);
    for (const auto& e : led.entries) CHECK(e.defect_agrees);
    // verifier's iterate data against direct computation
    for (int m = 1; m <= 4; ++m) CHECK(one[0].mu(m) == cz_index(iterate(g, m)));
}

TEST_CASE("finder rejects vacuous or non-positive input") {
    CHECK_THROWS_AS(find_irt(std::vector<IRTPath>{}, 0.5, 1, 1, 100), Error);
    auto neg = irt_path(realize(spec::rotation(-0.3, 1.0)));
    CHECK_THROWS_AS(find_irt({neg}, 0.5, 1, 1, 100), Error);
}

TEST_CASE("replay flags failed hypotheses and unpinned levels") {
    const int n = 2;
    auto low = orbit_data("low", true, realize(spec::rotation(0.45, 1.0)));
    auto high = orbit_data("high", true, realize(spec::direct_sum({spec::rotation(1.3, 1.0), spec::rotation(1.7, 1.0)})));
    const std::vector<OrbitData> orbits{low, high};
    auto cert = find_irt(replay_paths(orbits), 0.5, 2, 2, 100000);
    REQUIRE(cert);
    auto rep = replay_multiplicity_arithmetic(orbits, *cert, n);
    CHECK(rep.equations_hold);
    CHECK_FALSE(rep.orbits[0].hypothesis);
    CHECK(rep.orbits[1].hypothesis);
    CHECK_FALSE(rep.hypotheses_hold);
    CHECK_FALSE(rep.count_claimed);
    bool some_unpinned = false;
    for (const auto& w : rep.windows) some_unpinned = some_unpinned || !w.pinned;
    CHECK(some_unpinned);

    IRTCertificate short_cert = *cert;
    short_cert.k.pop_back();
    CHECK_THROWS_AS(replay_multiplicity_arithmetic(orbits, short_cert, n), Error);
}
