#include "sympidx/gallery.hpp"

#include <boost/integer/common_factor.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace sympidx {

namespace {

double integral_g(double a) { return 1.0 - 2.0 / (a + 1.0) + 1.0 / (2.0 * a + 1.0); }

Rational rational_lcm(const Rational& x, const Rational& y) {
    return Rational(boost::integer::lcm(x.numerator(), y.numerator()),
                    boost::integer::gcd(x.denominator(), y.denominator()));
}

std::optional<Rational> to_rational(double x, double tol, long max_den) {
    for (long d = 1; d <= max_den; ++d) {
        const double num = std::round(x * static_cast<double>(d));
        if (std::abs(x - num / static_cast<double>(d)) <= tol) return Rational(static_cast<long long>(num), d);
    }
    return std::nullopt;
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

Vec block(const Vec& x, int i) { return x.segment(2 * i, 2); }

}  // namespace

Profile::Profile(double r0, double c) : r0_(r0), c_(c) {
    const double target = (1.0 - c) / r0;
    if (!(target > 0 && target < 1))
        throw Error(ErrorKind::InvalidParams, "need 1 - r0 < C < 1 for f(0) = 1 with 0 < f' < 1");
    double lo = std::log(1e-8), hi = std::log(1e8);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (integral_g(std::exp(mid)) < target ? lo : hi) = mid;
    }
    a_ = std::exp(0.5 * (lo + hi));
}

double Profile::f(double r) const {
    if (r <= -r0_) return c_;
    r = std::min(r, 0.0);
    const double w = -r / r0_;  // 1 - u
    const double a = a_;
    return c_ + r0_ * ((1.0 - w) - 2.0 * (1.0 - std::pow(w, a + 1.0)) / (a + 1.0) +
                       (1.0 - std::pow(w, 2.0 * a + 1.0)) / (2.0 * a + 1.0));
}

double Profile::df(double r) const {
    if (r <= -r0_) return 0.0;
    r = std::min(r, 0.0);
    const double g = 1.0 - std::pow(-r / r0_, a_);
    return g * g;
}

double Profile::d2f(double r) const {
    if (r <= -r0_) return 0.0;
    r = std::min(r, 0.0);
    const double w = -r / r0_;
    return 2.0 * (1.0 - std::pow(w, a_)) * a_ * std::pow(w, a_ - 1.0) / r0_;
}

double Profile::s_inverse(double sigma) const {
    if (sigma < 1.0) throw Error(ErrorKind::InvalidParams, "s takes values in [1, inf)");
    double lo = -r0_, hi = 0.0;  // s decreasing: s(lo) = inf, s(hi) = 1
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (s(mid) > sigma ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void ExampleParams::validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidParams, m); };
    if (n < 2) bad("n must be >= 2");
    if (eps_num <= 0 || eps_den <= 0 || eps_num >= eps_den) bad("epsilon must be a rational in (0, 1)");
    if (!(r0 > 0 && r0 < 0.5)) bad("r0 must lie in (0, 1/2)");
    if (!(C > std::max(0.5, 1.0 - r0)) || !(C < 1.0)) bad("C must lie in (max(1/2, 1 - r0), 1)");
    if ((1.0 - C) / r0 <= 1.0 / 3.0) bad("C too close to 1: f'' would blow up at 0");
    if (!(eps_prime >= 0)) bad("eps_prime must be >= 0");
    const double e = epsilon();
    if (!(2.0 * (2.0 * r0 + (n - 2) * e) < 0.5)) bad("closing constraint 2(2 r0 + (n-2) eps) < 1/2 violated");
    if (!(2.0 * (1.0 + 2.0 * r0 + (n - 2) * e) < n + 1)) bad("positivity constraint b > 0 violated");
}

Example::Example(const ExampleParams& p) : p_(p), f_((p.validate(), p.r0), p.C) {}

double Example::F(const Vec& x, int i) const { return kPi * block(x, i).squaredNorm(); }

double Example::G(const Vec& x) const {
    double s = F(x, 0);
    const double f2 = F(x, 1);
    s += f2 * f2;
    for (int j = 2; j < p_.n; ++j) s += p_.epsilon() * F(x, j);
    return -s;
}

Vec Example::grad_G(const Vec& x) const {
    Vec g = Vec::Zero(x.size());
    g.segment(0, 2) = -kTwoPi * block(x, 0);
    g.segment(2, 2) = -2.0 * F(x, 1) * kTwoPi * block(x, 1);
    for (int j = 2; j < p_.n; ++j) g.segment(2 * j, 2) = -p_.epsilon() * kTwoPi * block(x, j);
    return g;
}

Mat Example::hess_G(const Vec& x) const {
    const int d = static_cast<int>(x.size());
    Mat h = Mat::Zero(d, d);
    h.block(0, 0, 2, 2) = -kTwoPi * Mat::Identity(2, 2);
    const Vec g2 = kTwoPi * block(x, 1);
    h.block(2, 2, 2, 2) = -(2.0 * g2 * g2.transpose() + 4.0 * kPi * F(x, 1) * Mat::Identity(2, 2));
    for (int j = 2; j < p_.n; ++j) h.block(2 * j, 2 * j, 2, 2) = -p_.epsilon() * kTwoPi * Mat::Identity(2, 2);
    return h;
}

Vec Example::grad_H(const Vec& x) const { return f_.df(G(x)) * grad_G(x); }

Mat Example::hess_H(const Vec& x) const {
    const double g = G(x);
    const Vec dg = grad_G(x);
    return f_.d2f(g) * dg * dg.transpose() + f_.df(g) * hess_G(x);
}

Vec Example::g_flow(const Vec& x, double t) const {
    Vec y(x.size());
    y.segment(0, 2) = rotation2(-kTwoPi * t) * block(x, 0);
    y.segment(2, 2) = rotation2(-2.0 * kTwoPi * F(x, 1) * t) * block(x, 1);
    for (int j = 2; j < p_.n; ++j) y.segment(2 * j, 2) = rotation2(-kTwoPi * p_.epsilon() * t) * block(x, j);
    return y;
}

Mat Example::h_flow_jacobian(const Vec& x, double t) const {
    const int d = static_cast<int>(x.size());
    const double g = G(x);
    const double tau = f_.df(g) * t;
    Mat dg = Mat::Zero(d, d);
    dg.block(0, 0, 2, 2) = rotation2(-kTwoPi * tau);
    const Mat r2 = rotation2(-2.0 * kTwoPi * F(x, 1) * tau);
    const Vec x2 = block(x, 1);
    // d/dF of the z_2 factor times grad F(z_2)
    dg.block(2, 2, 2, 2) = r2 + (standard_j(1) * r2 * x2) * (-2.0 * kTwoPi * tau) * (kTwoPi * x2).transpose();
    for (int j = 2; j < p_.n; ++j) dg.block(2 * j, 2 * j, 2, 2) = rotation2(-kTwoPi * p_.epsilon() * tau);
    const Vec y = g_flow(x, tau);
    const Vec xg = standard_j(p_.n) * grad_G(y);
    return dg + xg * (f_.d2f(g) * t) * grad_G(x).transpose();
}

// ---------------------------------------------------------------------------

namespace {

SymplecticPath integrate_monodromy(const std::function<Mat(double)>& a, int dim, double T, int resolution,
                                   const OrbitOptions& opt) {
    const long steps = std::max(2L, static_cast<long>(std::ceil(T * resolution)));
    std::vector<double> t(static_cast<size_t>(steps) + 1);
    for (long i = 0; i <= steps; ++i) t[static_cast<size_t>(i)] = T * static_cast<double>(i) / static_cast<double>(steps);
    return linearized_flow(a, dim, t, opt.ode, opt.drift_tol);
}

}  // namespace

OrbitRecord h_orbit(const Example& ex, const Vec& x0, const OrbitOptions& opt, const IndexOptions& iopt) {
    const int n = ex.n();
    if (x0.size() != 2 * n) throw Error(ErrorKind::InvalidParams, "initial point has the wrong dimension");
    const double g = ex.G(x0);
    if (g <= -ex.profile().r0()) throw Error(ErrorKind::OutsideChart, "G(x0) <= -r0");

    OrbitRecord r;
    r.x0 = x0;
    r.G_value = g;
    r.F2_value = ex.F(x0, 1);
    r.A_value = ex.A(x0);

    Rational tg_min(0);
    const double zero = 1e-14;
    Rational f2(0);
    if (r.F2_value > zero) {
        const auto q = to_rational(r.F2_value, opt.rational_tol, opt.max_denominator);
        if (!q) throw Error(ErrorKind::NotClosed, "F(z_2) is not rational at tolerance");
        f2 = *q;
    }
    const auto sigma = to_rational(ex.profile().s(g), opt.rational_tol, opt.max_denominator);
    if (!sigma) throw Error(ErrorKind::NotClosed, "s(G) is not rational at tolerance");
    auto join = [&](const Rational& p) { tg_min = tg_min.numerator() == 0 ? p : rational_lcm(tg_min, p); };
    if (block(x0, 0).squaredNorm() * kPi > zero) join(Rational(1));
    if (r.F2_value > zero) join(1 / (2 * f2));
    for (int j = 2; j < n; ++j)
        if (ex.F(x0, j) > zero) join(1 / ex.params().epsilon_q());
    const bool constant = tg_min.numerator() == 0;
    if (constant) tg_min = 1;

    const Rational action_min = tg_min * (*sigma + f2 * f2);
    r.m = action_min.denominator();
    r.T_G = tg_min * r.m;
    const double fp = ex.profile().df(g);
    r.T = to_double(r.T_G) / fp;
    if (r.T > opt.max_period)
        throw Error(ErrorKind::NotClosed, "period " + std::to_string(r.T) + " exceeds the cap");
    r.q = (action_min * r.m).numerator();
    r.action = r.T * (ex.profile().f(g) - fp * r.A_value);
    r.symmetric = constant || r.m % 2 == 0;

    const Example* e = &ex;
    const Vec x = x0;
    r.monodromy = integrate_monodromy([e, x](double t) { return e->hess_H(e->h_flow(x, t)); }, 2 * n, r.T,
                                      opt.resolution, opt);
    r.mu_h = cz_index(r.monodromy, iopt);
    r.mu_shifted = r.mu_h + static_cast<int>(r.q) * (2 * n + 2);
    return r;
}

OrbitRecord gamma0_record(const Example& ex, int k, const IndexOptions& iopt) {
    const int n = ex.n();
    std::vector<PathSpec> blocks{spec::rotation(-1.0, k), spec::identity(1, k)};
    for (int j = 2; j < n; ++j) blocks.push_back(spec::rotation(-ex.params().epsilon(), k));
    OrbitRecord r;
    r.x0 = Vec::Zero(2 * n);
    r.m = k;
    r.T = k;
    r.T_G = k;
    r.q = k;
    r.action = k;
    r.symmetric = true;
    r.monodromy = realize(spec::direct_sum(blocks));
    r.mu_h = cz_index(r.monodromy, iopt);
    r.mu_shifted = r.mu_h + k * (2 * n + 2);
    return r;
}

std::vector<OrbitRecord> sample_orbits(const Example& ex, int count, std::uint64_t seed, const OrbitOptions& opt,
                                       const IndexOptions& iopt) {
    const int n = ex.n();
    const double eps = ex.params().epsilon();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };

    std::vector<OrbitRecord> out;
    std::set<std::vector<long long>> seen;  // orbits up to the torus action
    const long max_attempts = 2000L * std::max(count, 1);
    for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
        // s(G) = p / q with small denominators keeps the Reeb period short
        const long qd = pick(1, 16);
        const long pn = pick(qd + 1, 4 * qd);
        const double sigma = static_cast<double>(pn) / static_cast<double>(qd);
        const double r = ex.profile().s_inverse(sigma);
        double budget = -r;
        std::vector<long long> key{pn / std::gcd(pn, qd), qd / std::gcd(pn, qd)};
        double f2 = 0;
        if (unit(rng) < 0.8) {
            const long b = pick(2, 64);
            const long amax = static_cast<long>(std::floor(std::sqrt(budget) * static_cast<double>(b)));
            if (amax < 1) continue;
            const long a = pick(1, amax);
            f2 = static_cast<double>(a) / static_cast<double>(b);
            if (f2 * f2 >= budget) continue;
            budget -= f2 * f2;
            key.push_back(a / std::gcd(a, b));
            key.push_back(b / std::gcd(a, b));
        }
        std::vector<double> fj(static_cast<size_t>(n), 0.0);
        for (int j = 2; j < n; ++j) {
            if (unit(rng) < 0.5) continue;
            fj[static_cast<size_t>(j)] = unit(rng) * 0.5 * budget / eps;
            budget -= eps * fj[static_cast<size_t>(j)];
            key.push_back(static_cast<long long>(std::llround(fj[static_cast<size_t>(j)] * 1e9)));
        }
        if (budget < 1e-6) continue;
        if (seen.count(key)) continue;
        fj[0] = budget;
        fj[1] = f2;
        Vec x0(2 * n);
        for (int j = 0; j < n; ++j) {
            const double rad = std::sqrt(fj[static_cast<size_t>(j)] / kPi);
            const double phase = kTwoPi * unit(rng);
            x0(2 * j) = rad * std::cos(phase);
            x0(2 * j + 1) = rad * std::sin(phase);
        }
        try {
            out.push_back(h_orbit(ex, x0, opt, iopt));
            seen.insert(key);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotClosed) throw;
        }
    }
    return out;
}

int delta(double x, double tol) {
    const double r = std::round(x);
    if (std::abs(x - r) <= tol) return 2 * static_cast<int>(r) + 1;
    return 2 * static_cast<int>(std::ceil(x)) - 1;
}

int index_lower_bound(const Example& ex, const OrbitRecord& r) {
    const int n = ex.n();
    const double tg = to_double(r.T_G);
    return static_cast<int>(r.q) * (2 * n + 2) - delta(tg) - delta(2.0 * r.F2_value * tg) -
           (n - 2) * delta(ex.params().epsilon() * tg) - 1;
}

MeanIndexReport mean_index_positivity_check(const Example& ex, const std::vector<OrbitRecord>& records,
                                            const IndexOptions& iopt) {
    const int n = ex.n();
    const auto& p = ex.params();
    MeanIndexReport rep;
    rep.b = n + 1 - 2.0 * (1.0 + 2.0 * p.r0 + p.epsilon() * (n - 2));
    auto row = [&](double mean, double T) {
        MeanIndexRow r;
        r.mean = mean;
        r.bound = rep.b * T;
        r.ok = r.mean > r.bound;
        return r;
    };
    for (const auto& rec : records) {
        rep.rows.push_back(row(mean_index(rec.monodromy, iopt) + static_cast<double>(rec.q) * (2 * n + 2), rec.T));
        if (!rep.rows.back().ok) ++rep.violations;
    }
    const OrbitRecord g0 = gamma0_record(ex, 1, iopt);
    rep.gamma0 = row(mean_index(g0.monodromy, iopt) + (2 * n + 2), 1.0);
    const SymplecticPath round = realize(spec::identity(n, 1.0 / p.C));
    rep.round_sphere = row(mean_index(round, iopt) + (2 * n + 2), 1.0 / p.C);
    if (!rep.gamma0.ok) ++rep.violations;
    if (!rep.round_sphere.ok) ++rep.violations;
    return rep;
}

// ---------------------------------------------------------------------------

SymplecticPath perturbed_gamma0_path(const ExampleParams& p) {
    const double h = 0.5;
    std::vector<PathSpec> blocks{spec::product({spec::rotation(-1.0, h), spec::shear(-p.eps_prime, h)}),
                                 spec::shear(-p.eps_prime, h)};
    for (int j = 2; j < p.n; ++j) blocks.push_back(spec::rotation(-p.epsilon(), h));
    return realize(spec::half_period_extend(spec::direct_sum(blocks)));
}

Gamma0Report perturbed_gamma0(const ExampleParams& p, const IndexOptions& iopt) {
    p.validate();
    const SymplecticPath full = perturbed_gamma0_path(p);
    const BottProfile b = bott_profile(full, iopt);
    Gamma0Report r;
    r.mu_unshifted = b.mu();
    r.defect = b.defect();
    r.mu = r.mu_unshifted + 2 * p.n + 2;
    r.sdc = r.mu + r.defect;
    return r;
}

// ---------------------------------------------------------------------------

Vec return_step(const Example& ex, const Vec& x, double* time_residual) {
    const double ep = ex.params().eps_prime;
    Vec y = x;
    for (int i = 0; i < 2; ++i) y(2 * i) -= 0.5 * ep * y(2 * i + 1);
    const double g = ex.G(y);
    const double a = g - ex.F(y, 1) * ex.F(y, 1);
    const auto& f = ex.profile();
    const double den = f.f(g) - f.df(g) * a;
    if (!(den > 0)) throw Error(ErrorKind::ReturnTimeNoConvergence, "f(G) - f'(G) A <= 0");
    const double t = 0.5 / den;
    if (time_residual) *time_residual = std::abs(t * den - 0.5);
    return ex.h_flow(y, t);
}

ReturnScanReport return_map_scan(const Example& ex, const ReturnScanOptions& opt) {
    const int n = ex.n();
    const int dim = 2 * n;
    ReturnScanReport rep;
    rep.radius = opt.radius;
    int g = opt.grid;
    if (g <= 0) {
        g = 41;
        while (g > 1 && std::pow(static_cast<double>(g), dim) > static_cast<double>(opt.max_points)) g -= 2;
    }
    rep.grid = g;
    long total = 1;
    for (int i = 0; i < dim; ++i) total *= g;
    rep.points = total;
    rep.min_relative_residual = std::numeric_limits<double>::infinity();
    const double h = g > 1 ? 2.0 * opt.radius / (g - 1) : 0.0;

    std::vector<int> idx(static_cast<size_t>(dim), 0);
    for (long c = 0; c < total; ++c) {
        long rest = c;
        Vec x(dim);
        for (int i = 0; i < dim; ++i) {
            idx[static_cast<size_t>(i)] = static_cast<int>(rest % g);
            rest /= g;
            x(i) = -opt.radius + h * idx[static_cast<size_t>(i)];
            if (2 * idx[static_cast<size_t>(i)] == g - 1) x(i) = 0.0;
        }
        double r1 = 0, r2 = 0;
        const Vec y1 = return_step(ex, x, &r1);
        const Vec y2 = return_step(ex, y1, &r2);
        rep.max_time_residual = std::max({rep.max_time_residual, r1, r2});
        const double res = (y2 - x).norm();
        const double xn = x.norm();
        if (xn == 0.0) {
            if (res <= opt.fixed_tol) rep.periodic_points.push_back(x);
        } else {
            const double rel = res / xn;
            rep.min_relative_residual = std::min(rep.min_relative_residual, rel);
            if (rel <= opt.fixed_tol) rep.periodic_points.push_back(x);
        }
        const bool z1_plane = x.tail(dim - 2).squaredNorm() == 0.0;
        if (z1_plane) {
            rep.field.emplace_back(x, res);
            if (x(0) * x(1) > 0) {
                ++rep.cone_points;
                if (ex.F(y1, 0) < ex.F(x, 0)) ++rep.cone_decreasing;
            }
        } else {
            ++rep.rotated_points;
            // angle swept by each nonzero z_i (i >= 2) under the return, after the shear
            Vec y = x;
            for (int i = 0; i < 2; ++i) y(2 * i) -= 0.5 * ex.params().eps_prime * y(2 * i + 1);
            bool all = true;
            for (int i = 1; i < n; ++i) {
                const Vec a = block(y, i);
                if (a.squaredNorm() == 0.0) continue;
                const Vec b = block(y1, i);
                const double ang = std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
                if (!(std::abs(ang) > 0.0)) all = false;
            }
            if (all) ++rep.rotated_nonzero;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

CircleActionPaths circle_action_paths(int n, double eps, const RealizeOptions& ropt) {
    if (n % 2 == 0) throw Error(ErrorKind::EvenN, "n must be odd");
    if (n < 3) throw Error(ErrorKind::InvalidParams, "n must be >= 3");
    std::vector<PathSpec> phi, psi;
    for (int i = 1; i <= n + 1; ++i) {
        const double theta = 2 * i <= n + 1 ? 1.0 : -1.0;
        phi.push_back(spec::rotation(theta, 0.5));
        psi.push_back(spec::rotation(theta - eps, 0.5));
    }
    CircleActionPaths out;
    out.phi_spec = spec::direct_sum(phi);
    out.psi_spec = spec::direct_sum(psi);
    out.phi_half = realize(out.phi_spec, ropt);
    out.psi_bar = realize(out.psi_spec, ropt);
    return out;
}

ReebHamReport reeb_ham_shift_check(const SymplecticPath& contact, int grid, const IndexOptions& iopt) {
    std::vector<Mat> ident(contact.size(), Mat::Identity(2, 2));
    std::vector<Mat> zero(contact.size(), Mat::Zero(2, 2));
    const SymplecticPath id(contact.times(), ident, contact.has_generator() ? zero : std::vector<Mat>{});
    const SymplecticPath ham = direct_sum({contact, id});

    const BottProfile bg = bott_profile(contact, iopt);
    const BottProfile bh = bott_profile(ham, iopt);
    ReebHamReport rep;
    rep.grid = grid;
    rep.shift_at_one = bg.value(0.0) - bh.value(0.0);
    std::vector<double> zs;
    for (int j = 1; j < grid; ++j) zs.push_back(kTwoPi * j / grid);
    for (size_t i = 1; i < bg.angles.size(); ++i) zs.push_back(bg.angles[i]);
    for (double z : zs)
        if (bg.value(z) != bh.value(z)) ++rep.mismatches;

    if (ham.dim_half() <= 4) {
        const auto ng = eigen1_normal_form(contact.endpoint(), iopt.spectrum);
        const auto nh = eigen1_normal_form(ham.endpoint(), iopt.spectrum);
        rep.b_equal = ng.b_plus == nh.b_plus && ng.b_minus == nh.b_minus;
    } else {
        rep.b_equal = bg.defect() == bh.defect();
    }
    return rep;
}

ReparamReport reparam_index_gap_check(const Example& ex, const std::vector<OrbitRecord>& records,
                                      const OrbitOptions& opt, const IndexOptions& iopt) {
    ReparamReport rep;
    const Example* e = &ex;
    for (const auto& r : records) {
        if (r.x0.norm() == 0.0) continue;
        const Vec x = r.x0;
        const SymplecticPath pg = integrate_monodromy([e, x](double t) { return e->hess_G(e->g_flow(x, t)); },
                                                      2 * ex.n(), to_double(r.T_G), opt.resolution, opt);
        ReparamRow row;
        row.mu_h = r.mu_h;
        row.mu_g = cz_index(pg, iopt);
        const int gap = std::abs(row.mu_h - row.mu_g);
        row.ok = gap <= 1;
        rep.max_gap = std::max(rep.max_gap, gap);
        if (!row.ok) ++rep.violations;
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<OrbitData> gallery_orbit_set(const Example& ex, const std::vector<OrbitRecord>& records,
                                         const IndexOptions& iopt) {
    const int n = ex.n();
    std::vector<OrbitData> out;
    out.push_back(orbit_data("gamma0_perturbed", true,
                             loop_multiply(n + 1, perturbed_gamma0_path(ex.params())), iopt));
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out.push_back(orbit_data("orbit" + std::to_string(i), r.symmetric,
                                 loop_multiply(static_cast<int>(r.q) * (n + 1), r.monodromy), iopt));
    }
    return out;
}

}  // namespace sympidx
