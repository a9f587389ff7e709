// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "support/perturbation_oracle.hpp"

#include "sympidx/gallery.hpp"
#include "sympidx/recurrence.hpp"
#include "sympidx/suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace sympidx;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* name, double budget, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget) {
        out.ok = false;
        out.detail << " [over budget " << budget << "s]";
    }
    if (!out.ok) ++failures;
    std::printf("%s  %2d  %-34s %8.2fs %s\n", out.ok ? "PASS" : "FAIL", id, name, secs, out.detail.str().c_str());
    std::fflush(stdout);
}

void suite(Outcome& out, const SuiteResult& r) {
    out.detail << " " << r.name << ": " << r.cases << " cases, " << r.violations << " violations, " << r.degenerate
               << " degenerate, " << r.tight << " tight, " << r.rejected << " draws rejected;";
    out.require(r.cases == 200 && r.violations == 0, r.name);
    for (const auto& f : r.failures) out.detail << " {" << f << "}";
}

SuiteOptions suite_opts(std::uint64_t seed) {
    SuiteOptions o;
    o.count = 200;
    o.seed = seed;
    return o;
}

}  // namespace

int main() {
    criterion(1, "convention anchor", 1.0, [](Outcome& o) {
        Rng rng(1);
        for (int n = 1; n <= 3; ++n) {
            o.require(cz_index(realize(spec::exponential(0.1 * Mat::Identity(2 * n, 2 * n), 1.0))) == n, "identity form");
            Mat s = random_symmetric(rng, 2 * n, 1.0);
            s = 0.05 * (s * s.transpose() + Mat::Identity(2 * n, 2 * n)) / (1.0 + s.norm() * s.norm());
            o.require(cz_index(realize(spec::exponential(s, 1.0))) == n, "random positive form");
        }
    });

    criterion(2, "half-turn block values", 10.0, [](Outcome& o) {
        const double ep = 1e-3;
        auto r = realize(spec::rotation(-1, 0.5));
        auto p = realize(spec::product({spec::rotation(-1, 0.5), spec::shear(-ep, 0.5)}));
        auto p2 = iterate(p, 2);
        o.require(cz_index(r) == -1, "mu(R) = -1");
        o.require(cz_index(p) == -1, "mu(P) = -1");
        o.require(cz_index(p2) == -2, "mu(P^2) = -2");
        auto sp = splitting_numbers(p2, 0.0);
        o.require(sp.first == 0 && sp.second == 0, "S+-_1(P^2) = 0");
        auto s = realize(spec::shear(-ep, 0.5));
        for (int k = 1; k <= 6; ++k) {
            auto sk = iterate(s, k);
            o.require(cz_index(sk) == 0 && nullity_at(sk, 0.0) == 1, "mu(S^k) = 0, nu = 1");
        }
        auto s2 = iterate(s, 2);
        auto nf = eigen1_normal_form(s2.endpoint());
        o.require(defect(s2) == -1 && nf.b_minus == 0 && nf.b_plus == 1, "defect(S^2) = -1");
        for (int n = 2; n <= 4; ++n) {
            ExampleParams prm;
            prm.n = n;
            const int mu = cz_index(perturbed_gamma0_path(prm));
            o.require(mu == -n, "mu(Gamma^2) = -n");
            o.detail << " n=" << n << ":" << mu;
        }
    });

    criterion(3, "gallery constant orbit", 30.0, [](Outcome& o) {
        const Example ex{ExampleParams{}};
        auto g = h_orbit(ex, Vec::Zero(4));
        o.require(g.mu_h == -4 && g.q == 1 && g.mu_shifted == 2, "mu(gamma_H) = -n-2 and mu(gamma_0) = n");
        auto pg = perturbed_gamma0(ExampleParams{});
        o.require(pg.mu == 4 && pg.sdc == 2, "perturbed (4, 2)");
        ExampleParams p3;
        p3.n = 3;
        auto pg3 = perturbed_gamma0(p3);
        o.require(pg3.mu == 5 && pg3.sdc == 3, "perturbed n=3 (5, 3)");
        o.detail << " mu_H=" << g.mu_h << " mu=" << g.mu_shifted << " (" << pg.mu << "," << pg.sdc << ") (" << pg3.mu
                 << "," << pg3.sdc << ")";
    });

    criterion(4, "circle action suite", 5.0, [](Outcome& o) {
        const double eps = 1e-3;
        auto ca = circle_action_paths(3, eps);
        const int b = bott(ca.phi_half, kPi);
        const int m1 = cz_index(ca.psi_bar);
        const int m2 = cz_index(iterate(ca.psi_bar, 2));
        const Mat re = block_diag(std::vector<Mat>(4, rotation2(-kPi * eps)));
        const double gap = (ca.psi_bar.samples().back() + re).cwiseAbs().maxCoeff();
        o.require(b == -4, "B_Phi(-1) = -4");
        o.require(m1 == 0 && m2 == -4, "mu(Psi) = 0, mu(Psi^2) = -4");
        o.require(gap < 1e-9, "Psi(1/2) = -R_eps");
        o.detail << " B(-1)=" << b << " mu=" << m1 << " mu2=" << m2 << " endpoint gap=" << gap;
    });

    criterion(5, "bott formula and splitting", 120.0, [](Outcome& o) {
        suite(o, bott_formula_suite(suite_opts(5)));
        suite(o, splitting_suite(suite_opts(55)));
    });

    criterion(6, "comparison monotonicity", 120.0, [](Outcome& o) { suite(o, comparison_suite(suite_opts(6))); });

    criterion(7, "second iterate inequalities", 120.0, [](Outcome& o) {
        suite(o, sdc_second_iterate_suite(suite_opts(7)));
        suite(o, sdc_jump_suite(suite_opts(77)));
    });

    criterion(8, "perturbation oracle agreement", 180.0, [](Outcome& o) {
        Rng rng(8);
        RandomSpecOptions opt;
        opt.max_dim_half = 3;
        int agree = 0, upper = 0, cases = 0;
        long skipped = 0;
        while (cases < 50) {
            const int dh = std::uniform_int_distribution<int>(1, 3)(rng);
            auto p = random_path(rng, dh, opt, RealizeOptions{256, 0.25, 0.5, 1e-8, {}}, {}, {0.0}, nullptr);
            if (nullity_at(p, 0.0) == 0) continue;
            ++cases;
            auto r = oracle::perturb_endpoint(p, 1000, 1e-4, 8000 + cases);
            skipped += r.skipped;
            const int cz = cz_index(p);
            if (r.min == cz) ++agree;
            else o.detail << " {case " << cases << ": oracle min " << r.min << " vs " << cz << "}";
            if (r.max == bott_plus(p, 0.0)) ++upper;
        }
        o.require(agree == cases, "min over perturbations = cz_index");
        o.detail << " " << agree << "/" << cases << " min agree, " << upper << "/" << cases
                 << " max agree with B+(1), " << skipped << " degenerate draws skipped";
    });

    criterion(9, "gallery orbit sweep", 300.0, [](Outcome& o) {
        const Example ex{ExampleParams{}};
        auto recs = sample_orbits(ex, 240, 9);
        const int n = ex.n();
        int bad_mu = 0, bad_action = 0;
        for (const auto& r : recs) {
            if (r.mu_shifted < n + 2) ++bad_mu;
            if (!(r.action > 1.0) || std::abs(r.action - std::round(r.action)) > 1e-6) ++bad_action;
        }
        auto mi = mean_index_positivity_check(ex, recs);
        o.require(recs.size() >= 200, ">= 200 orbits");
        o.require(bad_mu == 0, "mu >= n+2");
        o.require(bad_action == 0, "integer action > 1");
        o.require(mi.violations == 0, "mean index > bT");
        o.detail << " " << recs.size() << " orbits, mu violations " << bad_mu << ", action violations " << bad_action
                 << ", mean-index violations " << mi.violations << " (b=" << mi.b << ")";
    });

    criterion(10, "return map scan", 300.0, [](Outcome& o) {
        const Example ex{ExampleParams{}};
        auto rep = return_map_scan(ex);
        o.require(rep.origin_unique(), "origin is the only 2-periodic point");
        o.require(rep.max_time_residual < 1e-10, "return-time residual < 1e-10");
        o.detail << " grid " << rep.grid << "^4 = " << rep.points << " points, periodic " << rep.periodic_points.size()
                 << ", min relative residual " << rep.min_relative_residual << ", time residual "
                 << rep.max_time_residual;
    });

    criterion(11, "index recurrence round trip", 120.0, [](Outcome& o) {
        std::vector<IRTPath> pair{irt_path(realize(spec::rotation(1.0 / 3.0, 1.0))),
                                  irt_path(realize(spec::rotation(1.25, 1.0)))};
        auto cert = find_irt(pair, 0.5, 3, 4, 100000);
        o.require(cert.has_value(), "certificate found");
        if (cert) {
            o.require(verify_irt(pair, *cert).passed, "verify_irt passes");
            o.detail << " d=" << cert->d << " k=(" << cert->k[0] << "," << cert->k[1] << ")";
        }
        const Example ex{ExampleParams{}};
        auto recs = sample_orbits(ex, 3, 11);
        auto orbits = gallery_orbit_set(ex, recs);
        auto gc = find_irt(replay_paths(orbits), 0.5, 2, 2, 200000);
        o.require(gc.has_value(), "gallery certificate found");
        if (gc) {
            auto rep = replay_multiplicity_arithmetic(orbits, *gc, ex.n());
            o.require(rep.equations_hold, "replay equations");
            o.require(rep.windows_consistent, "windows consistent");
            o.detail << " gallery d=" << gc->d << " orbits " << orbits.size() << " hypotheses "
                     << (rep.hypotheses_hold ? "hold" : "fail (perturbed constant orbit is not strongly convex)");
        }
    });

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
