#include "sympidx/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace sympidx {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

double random_weight(Rng& rng, const RandomSpecOptions& opt) {
    const double lo = opt.positive_bias ? 0.0 : -2.5;
    if (coin(rng, opt.rational_probability)) {
        static const int dens[] = {1, 2, 3, 4, 6, 12};
        const int q = dens[uniform_int(rng, 0, 5)];
        const int k = uniform_int(rng, static_cast<int>(std::ceil(lo * q)), static_cast<int>(2.5 * q));
        return static_cast<double>(k) / q;
    }
    return uniform(rng, lo, 2.5);
}

Mat nilpotent4(bool jordan4, double s) {
    Mat q = Mat::Zero(4, 4);
    if (jordan4) {
        q(1, 2) = q(2, 1) = 0.5 * s;  // p1 q2 + p2^2
        q(3, 3) = s;
    } else {
        q(0, 3) = q(3, 0) = 0.5 * s;  // q1 p2
    }
    return q;
}

std::vector<double> probe_roots(int max_k) {
    std::vector<double> out;
    for (int k = 1; k <= max_k; ++k)
        for (int j = 0; j < k; ++j) out.push_back(kTwoPi * j / k);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

std::vector<double> grid_angles(int grid) {
    std::vector<double> out;
    for (int j = 0; j < grid; ++j) out.push_back(kTwoPi * j / grid);
    return out;
}

class Runner {
public:
    Runner(const std::string& name, const SuiteOptions& opt) : opt_(opt), start_(std::chrono::steady_clock::now()) {
        res_.name = name;
    }

    // f returns an empty string on success, else a description
    void run(const std::function<std::string(int)>& f) {
        for (int c = 0; c < opt_.count; ++c) {
            std::string msg;
            try {
                msg = f(c);
            } catch (const Error& e) {
                msg = std::string("error: ") + e.what();
            }
            ++res_.cases;
            if (!msg.empty()) {
                ++res_.violations;
                if (res_.failures.size() < 8) {
                    std::ostringstream os;
                    os << "seed " << opt_.seed << " case " << c << ": " << msg;
                    res_.failures.push_back(os.str());
                }
            }
        }
    }

    SuiteResult& result() { return res_; }

    SuiteResult finish(long rejected) {
        res_.rejected = rejected;
        res_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return res_;
    }

private:
    SuiteOptions opt_;
    SuiteResult res_;
    std::chrono::steady_clock::time_point start_;
};

std::string mismatch(const char* what, long a, long b) {
    std::ostringstream os;
    os << what << ": " << a << " vs " << b;
    return os.str();
}

}  // namespace

Mat random_symmetric(Rng& rng, int dim, double scale) {
    std::normal_distribution<double> nd(0.0, scale);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = nd(rng);
    return 0.5 * (a + a.transpose());
}

Mat random_symplectic(Rng& rng, int dim_half, double scale) {
    return symplectic_exp(random_symmetric(rng, 2 * dim_half, scale));
}

PathSpec random_path_spec(Rng& rng, int dim_half, const RandomSpecOptions& opt) {
    const double d = opt.duration;
    std::vector<PathSpec> blocks;
    int used = 0;
    while (used < dim_half) {
        const int room = dim_half - used;
        int kind = uniform_int(rng, 0, opt.allow_ode ? 6 : 5);
        if (room < 2 && kind == 4) kind = 0;
        switch (kind) {
            case 0:
            case 1:
                blocks.push_back(spec::rotation(random_weight(rng, opt), d));
                used += 1;
                break;
            case 2:
                blocks.push_back(spec::shear(uniform(rng, 0.2, 2.0) * (coin(rng, 0.5) ? 1 : -1), d));
                used += 1;
                break;
            case 3: {
                const int m = room >= 2 && coin(rng, 0.4) ? 2 : 1;
                Mat q = random_symmetric(rng, 2 * m, 2.0);
                if (opt.positive_bias) {
                    const double lo = Eigen::SelfAdjointEigenSolver<Mat>(q).eigenvalues().minCoeff();
                    q += (std::max(0.0, -lo) + 0.5) * Mat::Identity(2 * m, 2 * m);
                }
                blocks.push_back(spec::exponential(q, d));
                used += m;
                break;
            }
            case 4:
                blocks.push_back(spec::exponential(nilpotent4(coin(rng, 0.5), uniform(rng, 0.3, 2.0) *
                                                                                 (coin(rng, 0.5) ? 1 : -1)),
                                                   d));
                used += 2;
                break;
            case 5:
                if (opt.positive_bias && coin(rng, 0.7)) {
                    blocks.push_back(spec::rotation(random_weight(rng, opt), d));
                } else {
                    blocks.push_back(spec::identity(1, d));
                }
                used += 1;
                break;
            default: {
                const int m = room >= 2 && coin(rng, 0.3) ? 2 : 1;
                Mat a0 = random_symmetric(rng, 2 * m, 1.5);
                if (opt.positive_bias) a0 += 2.0 * Mat::Identity(2 * m, 2 * m);
                blocks.push_back(spec::generator({a0, random_symmetric(rng, 2 * m, 1.5)}, d));
                used += m;
                break;
            }
        }
    }
    std::shuffle(blocks.begin(), blocks.end(), rng);
    PathSpec s = blocks.size() == 1 ? blocks[0] : spec::direct_sum(blocks);
    if (coin(rng, opt.conjugate_probability)) s = spec::conjugate(random_symplectic(rng, dim_half, 0.3), s);
    return s;
}

namespace {

double circle_dist(double a, double b) {
    const double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

// Eigen-angles of the iterates that sit near, but not on, a probe or one another.
bool near_coincidence(const SymplecticPath& p, const RandomSpecOptions& opt, const IndexOptions& iopt,
                      const std::vector<double>& probes) {
    const CircleSpectrum sp = circle_spectrum(p.endpoint(), iopt.spectrum);
    for (int k = 1; k <= opt.probe_iterates; ++k) {
        std::vector<double> pts{0.0};
        pts.insert(pts.end(), probes.begin(), probes.end());
        for (const auto& c : sp.points) pts.push_back(k * c.angle);
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) {
                const double d = circle_dist(pts[i], pts[j]);
                if (d > 1e-9 && d < opt.separation) return true;
            }
    }
    return false;
}

}  // namespace

SymplecticPath random_path(Rng& rng, int dim_half, const RandomSpecOptions& opt, const RealizeOptions& ropt,
                           const IndexOptions& iopt, const std::vector<double>& probe_angles, DrawStats* stats) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        if (stats) ++stats->drawn;
        const PathSpec s = random_path_spec(rng, dim_half, opt);
        try {
            SymplecticPath p = realize(s, ropt);
            if (p.samples().back().operatorNorm() > opt.max_endpoint_norm || near_coincidence(p, opt, iopt, probe_angles)) {
                if (stats) ++stats->rejected;
                continue;
            }
            (void)bott_profile(p, iopt);
            for (int k = 2; k <= opt.probe_iterates; ++k) (void)bott_profile(iterate(p, k), iopt);
            if (!probe_angles.empty()) (void)bott_many(p, probe_angles, iopt);
            return p;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::ClusterAmbiguity && e.kind() != ErrorKind::SpectralProximity) throw;
            if (stats) ++stats->rejected;
        }
    }
    throw Error(ErrorKind::InvalidParams, "no resolvable random path in 1000 draws");
}

// ---------------------------------------------------------------------------

SuiteResult bott_formula_suite(const SuiteOptions& opt) {
    Runner run("bott_formula", opt);
    Rng rng(opt.seed);
    DrawStats st;
    const auto roots = probe_roots(opt.max_k);
    RandomSpecOptions ro;
    run.run([&](int) -> std::string {
        const int dh = uniform_int(rng, 1, 4);
        const SymplecticPath p = random_path(rng, dh, ro, opt.realize, opt.index, roots, &st);
        const BottProfile prof = bott_profile(p, opt.index);
        for (int k = 1; k <= opt.max_k; ++k)
            if (prof.nu_iterate(k) > 0) {
                ++run.result().degenerate;
                break;
            }
        std::vector<int> mu(static_cast<size_t>(opt.max_k) + 1);
        for (int k = 1; k <= opt.max_k; ++k) {
            mu[static_cast<size_t>(k)] = cz_index(k == 1 ? p : iterate(p, k), opt.index);
            std::vector<double> zs;
            for (int j = 0; j < k; ++j) zs.push_back(kTwoPi * j / k);
            int sum = 0;
            for (int b : bott_many(p, zs, opt.index)) sum += b;
            if (sum != mu[static_cast<size_t>(k)]) return mismatch("mu(Gamma^k) vs sum of B at k-th roots", mu[k], sum);
        }
        if (opt.max_k >= 4) {
            const auto b = bott_many(p, {kPi, kTwoPi / 3, kPi / 2}, opt.index);
            if (b[0] != mu[2] - mu[1]) return mismatch("B(-1) vs mu(Gamma^2) - mu(Gamma)", b[0], mu[2] - mu[1]);
            if (2 * b[1] != mu[3] - mu[1]) return mismatch("2B(e^{2pi i/3}) vs mu3 - mu1", 2 * b[1], mu[3] - mu[1]);
            if (2 * b[2] != mu[4] - mu[2]) return mismatch("2B(i) vs mu4 - mu2", 2 * b[2], mu[4] - mu[2]);
        }
        return {};
    });
    return run.finish(st.rejected);
}

SuiteResult splitting_suite(const SuiteOptions& opt) {
    Runner run("splitting", opt);
    Rng rng(opt.seed);
    DrawStats st;
    const auto grid = grid_angles(opt.grid);
    RandomSpecOptions ro;
    ro.probe_iterates = 4;
    run.run([&](int) -> std::string {
        const int dh = uniform_int(rng, 1, 4);
        const SymplecticPath p = random_path(rng, dh, ro, opt.realize, opt.index, grid, &st);
        const BottProfile b = bott_profile(p, opt.index);
        const size_t nb = b.angles.size();
        if (std::any_of(b.nu.begin(), b.nu.end(), [](int v) { return v > 0; })) ++run.result().degenerate;

        // reconstruction on the grid and at the eigenvalues
        std::vector<double> zs = grid;
        for (size_t i = 1; i < nb; ++i) zs.push_back(b.angles[i]);
        const auto direct = bott_many(p, zs, opt.index);
        for (size_t j = 0; j < zs.size(); ++j) {
            const double th = zs[j];
            if (th == 0.0) continue;
            int v = b.at[0] + b.splitting_plus(0);
            for (size_t i = 1; i < nb; ++i) {
                const double a = b.angles[i];
                if (std::abs(a - th) <= b.root_match_tol) {
                    v -= b.splitting_minus(i);
                    break;
                }
                if (a > th) break;
                v += b.splitting_plus(i) - b.splitting_minus(i);
            }
            if (v != direct[j]) return mismatch("reconstructed B vs direct B", v, direct[j]);
        }

        // conjugation symmetry
        for (size_t i = 0; i < nb; ++i) {
            const auto s = b.splitting(b.angles[i]);
            const auto c = b.splitting(b.angles[i] == 0.0 ? 0.0 : kTwoPi - b.angles[i]);
            if (s.first != c.second || s.second != c.first)
                return mismatch("S+_z vs S-_{conj z}", s.first, c.second);
        }

        // multiplicativity
        for (int k = 2; k <= 4; ++k) {
            const BottProfile bk = bott_profile(iterate(p, k), opt.index);
            for (size_t i = 0; i < bk.angles.size(); ++i) {
                const double z = bk.angles[i];
                int sp = 0, sm = 0;
                for (size_t w = 0; w < nb; ++w) {
                    double d = std::fmod(k * b.angles[w] - z, kTwoPi);
                    if (d < 0) d += kTwoPi;
                    if (std::min(d, kTwoPi - d) <= k * b.root_match_tol) {
                        sp += b.splitting_plus(w);
                        sm += b.splitting_minus(w);
                    }
                }
                if (sp != bk.splitting_plus(i) || sm != bk.splitting_minus(i))
                    return mismatch("S+-_z(P^k) vs sum over k-th roots", bk.splitting_plus(i) * 100 + bk.splitting_minus(i),
                                    sp * 100 + sm);
            }
        }
        return {};
    });
    return run.finish(st.rejected);
}

SuiteResult comparison_suite(const SuiteOptions& opt) {
    Runner run("comparison", opt);
    Rng rng(opt.seed);
    long rejected = 0;
    const auto grid = grid_angles(opt.grid);
    run.run([&](int) -> std::string {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const int dh = uniform_int(rng, 1, 4);
            const int dim = 2 * dh;
            const Mat a0 = random_symmetric(rng, dim, 2.0);
            const Mat a1 = random_symmetric(rng, dim, 2.0);
            // A2 = A1 - (B0 + t B1), B0, B1 >= 0 with random rank
            auto psd = [&]() {
                const int rank = uniform_int(rng, 0, dim);
                Mat f = Mat::Zero(dim, dim);
                if (rank > 0) f.leftCols(rank) = random_symmetric(rng, dim, 1.0).leftCols(rank);
                return Mat(f * f.transpose());
            };
            const Mat b0 = psd(), b1 = psd();
            try {
                const SymplecticPath p1 = realize(spec::generator({a0, a1}, 1.0), opt.realize);
                const SymplecticPath p2 = realize(spec::generator({a0 - b0, a1 - b1}, 1.0), opt.realize);
                const auto v1 = bott_many(p1, grid, opt.index);
                const auto v2 = bott_many(p2, grid, opt.index);
                for (size_t j = 0; j < grid.size(); ++j)
                    if (v1[j] < v2[j]) return mismatch("B1(z) >= B2(z) at grid point", v1[j], v2[j]);
                return {};
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::ClusterAmbiguity && e.kind() != ErrorKind::SpectralProximity) throw;
                ++rejected;
            }
        }
        return "no resolvable pair";
    });
    return run.finish(rejected);
}

SuiteResult sdc_second_iterate_suite(const SuiteOptions& opt) {
    Runner run("sdc_2nd_iterate", opt);
    Rng rng(opt.seed);
    DrawStats st;
    RandomSpecOptions ro;
    ro.positive_bias = true;
    ro.min_dim_half = 2;
    ro.probe_iterates = 2;
    run.run([&](int) -> std::string {
        for (int attempt = 0; attempt < 5000; ++attempt) {
            const int dh = uniform_int(rng, 2, 4);
            const int n = dh - 1;
            const SymplecticPath p = random_path(rng, dh, ro, opt.realize, opt.index, {kPi}, &st);
            const int mu1 = cz_index(p, opt.index);
            if (mu1 < n + 1) continue;
            if (mu1 == n + 1) ++run.result().tight;
            const BottProfile b2 = bott_profile(iterate(p, 2), opt.index);
            if (b2.nu[0] > 0) ++run.result().degenerate;
            const int lhs = b2.mu() + b2.defect();
            if (lhs < n + 1) return mismatch("mu(Gamma^2) + 2S+_1 - nu vs n+1", lhs, n + 1);
            return {};
        }
        return "hypothesis never met";
    });
    return run.finish(st.rejected);
}

SuiteResult sdc_jump_suite(const SuiteOptions& opt) {
    Runner run("sdc_jump", opt);
    Rng rng(opt.seed);
    DrawStats st;
    RandomSpecOptions ro;
    ro.positive_bias = true;
    ro.duration = 0.5;
    ro.probe_iterates = 2;
    run.run([&](int) -> std::string {
        for (int attempt = 0; attempt < 5000; ++attempt) {
            const int dh = uniform_int(rng, 2, 4);
            const int n = dh - 1;
            const SymplecticPath p = random_path(rng, dh, ro, opt.realize, opt.index, {kPi}, &st);
            const SymplecticPath p2 = iterate(p, 2);
            const BottProfile b2 = bott_profile(p2, opt.index);
            const int jump = b2.mu() - cz_index(p, opt.index);
            if (jump < n + 1) continue;
            if (jump == n + 1) ++run.result().tight;
            if (b2.nu[0] > 0) ++run.result().degenerate;
            const int lhs = b2.mu() + b2.defect();
            if (lhs < n + 1) return mismatch("mu(Psi^2) + 2S+_1 - nu vs n+1", lhs, n + 1);
            return {};
        }
        return "hypothesis never met";
    });
    return run.finish(st.rejected);
}

SuiteResult iteration_monotonicity_suite(const SuiteOptions& opt) {
    Runner run("index_iteration", opt);
    Rng rng(opt.seed);
    DrawStats st;
    RandomSpecOptions ro;
    ro.positive_bias = true;
    const auto roots = probe_roots(6);
    run.run([&](int) -> std::string {
        for (int attempt = 0; attempt < 5000; ++attempt) {
            const int n = uniform_int(rng, 1, 4);
            const SymplecticPath p = random_path(rng, n, ro, opt.realize, opt.index, roots, &st);
            const int mu1 = cz_index(p, opt.index);
            if (mu1 < n) continue;
            if (mu1 == n) ++run.result().tight;
            const BottProfile b = bott_profile(p, opt.index);
            for (int k = 1; k <= 5; ++k)
                if (b.nu_iterate(k) > 0) {
                    ++run.result().degenerate;
                    break;
                }
            int prev_mu = b.mu();
            for (int k = 1; k <= 5; ++k) {
                const int nu = b.nu_iterate(k);
                const int next = cz_index(iterate(p, k + 1), opt.index);
                if (prev_mu + nu > next) return mismatch("mu(Gamma^k) + nu(Gamma^k) vs mu(Gamma^{k+1})", prev_mu + nu, next);
                prev_mu = next;
            }
            return {};
        }
        return "hypothesis never met";
    });
    return run.finish(st.rejected);
}

SuiteResult semicontinuity_suite(const SuiteOptions& opt) {
    Runner run("bott_plus", opt);
    Rng rng(opt.seed);
    DrawStats st;
    const auto grid = grid_angles(opt.grid);
    run.run([&](int) -> std::string {
        const int dh = uniform_int(rng, 1, 4);
        const SymplecticPath p = random_path(rng, dh, {}, opt.realize, opt.index, grid, &st);
        const BottProfile b = bott_profile(p, opt.index);
        if (std::any_of(b.nu.begin(), b.nu.end(), [](int v) { return v > 0; })) ++run.result().degenerate;
        std::vector<double> zs = grid;
        for (double a : b.angles) zs.push_back(a);
        const SymplecticPath pi = inverse(p);
        const auto lo = bott_many(p, zs, opt.index);
        const auto hi = bott_many(pi, zs, opt.index);
        for (size_t j = 0; j < zs.size(); ++j) {
            const int plus = -hi[j];
            if (lo[j] > plus) return mismatch("B(z) <= B+(z)", lo[j], plus);
            if (b.nullity(zs[j]) == 0 && lo[j] != plus) return mismatch("B = B+ off the spectrum", lo[j], plus);
        }
        return {};
    });
    return run.finish(st.rejected);
}

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opt) {
    return {bott_formula_suite(opt),      splitting_suite(opt),      comparison_suite(opt),
            sdc_second_iterate_suite(opt), sdc_jump_suite(opt),       iteration_monotonicity_suite(opt),
            semicontinuity_suite(opt)};
}

}  // namespace sympidx
