#include "doctest.h"

#include "support/perturbation_oracle.hpp"

#include "sympidx/gallery.hpp"
#include "sympidx/suites.hpp"

using namespace sympidx;

namespace {

SuiteOptions small(std::uint64_t seed) {
    SuiteOptions o;
    o.count = 25;
    o.seed = seed;
    return o;
}

void check_suite(const SuiteResult& r) {
    INFO(r.name);
    for (const auto& f : r.failures) INFO(f);
    CHECK(r.cases == 25);
    CHECK(r.violations == 0);
}

}  // namespace

TEST_CASE("property suites at small counts") {
    check_suite(bott_formula_suite(small(101)));
    check_suite(splitting_suite(small(102)));
    check_suite(comparison_suite(small(103)));
    check_suite(sdc_second_iterate_suite(small(104)));
    check_suite(sdc_jump_suite(small(105)));
    check_suite(iteration_monotonicity_suite(small(106)));
    check_suite(semicontinuity_suite(small(107)));
}

TEST_CASE("random draws are reproducible") {
    Rng a(42), b(42);
    RandomSpecOptions opt;
    for (int i = 0; i < 10; ++i) {
        auto pa = random_path(a, 2, opt, RealizeOptions{256, 0.25, 0.5, 1e-8, {}}, {}, {0.0}, nullptr);
        auto pb = random_path(b, 2, opt, RealizeOptions{256, 0.25, 0.5, 1e-8, {}}, {}, {0.0}, nullptr);
        CHECK((pa.samples().back() - pb.samples().back()).norm() == 0.0);
    }
}

TEST_CASE("graph index oracle on nondegenerate paths") {
    for (int n = 1; n <= 3; ++n) {
        auto p = realize(spec::exponential(0.1 * Mat::Identity(2 * n, 2 * n), 1.0));
        CHECK(oracle::graph_index(p.samples()) == doctest::Approx(n));
    }
    for (double w : {1.3, -0.7, 2.45}) {
        auto p = realize(spec::rotation(w, 1.0));
        CHECK(oracle::graph_index(p.samples()) == doctest::Approx(cz_index(p)));
    }
}

TEST_CASE("perturbation oracle brackets the index") {
    auto id = realize(spec::identity(2, 1.0));
    auto r = oracle::perturb_endpoint(id, 300, 1e-4, 1);
    CHECK(r.min == -2);
    CHECK(r.max == bott_plus(id, 0.0));

    auto g = perturbed_gamma0_path(ExampleParams{});
    auto rg = oracle::perturb_endpoint(g, 1000, 1e-4, 2);
    CHECK(rg.min == cz_index(g));
    CHECK(rg.max == bott_plus(g, 0.0));

    Rng rng(77);
    RandomSpecOptions opt;
    opt.max_dim_half = 3;
    for (int c = 0; c < 8; ++c) {
        SymplecticPath p;
        do {
            p = random_path(rng, 1 + c % 3, opt, RealizeOptions{256, 0.25, 0.5, 1e-8, {}}, {}, {0.0}, nullptr);
        } while (nullity_at(p, 0.0) == 0);
        auto o = oracle::perturb_endpoint(p, 1000, 1e-4, 100 + c);
        CHECK(o.min == cz_index(p));
        CHECK(o.max == bott_plus(p, 0.0));
    }
}
