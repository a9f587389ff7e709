#pragma once

#include "sympidx/index.hpp"
#include "sympidx/path.hpp"
#include "sympidx/recurrence.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sympidx {

using Rational = boost::rational<long long>;

// Bump profile f on (-inf, 0]: f' = (1 - (1-u)^a)^2 with u = (r + r0)/r0 on [-r0, 0],
// f = C below -r0. The exponent a is fixed by f(0) = 1.
class Profile {
public:
    Profile(double r0, double c);

    double f(double r) const;
    double df(double r) const;
    double d2f(double r) const;
    double s(double r) const { return f(r) / df(r) - r; }
    // r in (-r0, 0] with s(r) = sigma, sigma >= 1
    double s_inverse(double sigma) const;

    double r0() const { return r0_; }
    double c() const { return c_; }
    double exponent() const { return a_; }

private:
    double r0_, c_, a_;
};

struct ExampleParams {
    int n = 2;
    long eps_num = 1, eps_den = 10;
    double r0 = 0.05;
    double C = 0.97;
    double eps_prime = 1e-3;

    double epsilon() const { return static_cast<double>(eps_num) / static_cast<double>(eps_den); }
    Rational epsilon_q() const { return Rational(eps_num, eps_den); }
    void validate() const;  // throws InvalidParams
};

// Hamiltonians on R^{2n}, z_i = q_i + i p_i and F(z) = pi |z|^2.
// G = -(F(z_1) + F(z_2)^2 + eps sum_{j>2} F(z_j)), H = f o G.
class Example {
public:
    explicit Example(const ExampleParams& p);

    const ExampleParams& params() const { return p_; }
    const Profile& profile() const { return f_; }
    int n() const { return p_.n; }

    double F(const Vec& x, int i) const;  // F(z_i), 0-based block
    double G(const Vec& x) const;
    double A(const Vec& x) const { return G(x) - F(x, 1) * F(x, 1); }
    double H(const Vec& x) const { return f_.f(G(x)); }
    Vec grad_G(const Vec& x) const;
    Mat hess_G(const Vec& x) const;
    Vec grad_H(const Vec& x) const;
    Mat hess_H(const Vec& x) const;

    // closed-form flows
    Vec g_flow(const Vec& x, double t) const;
    Vec h_flow(const Vec& x, double t) const { return g_flow(x, f_.df(G(x)) * t); }
    // d(phi^H_t)(x) in closed form
    Mat h_flow_jacobian(const Vec& x, double t) const;

private:
    ExampleParams p_;
    Profile f_;
};

struct OrbitRecord {
    Vec x0;
    long m = 1;            // the closed Reeb orbit covers the minimal H-orbit m times
    double T = 0;          // period of the closed orbit, m times the minimal H-period
    Rational T_G{0};       // f'(G) T, the matching time of the G-flow
    long q = 0;            // homotopy class, equal to the action A_H over [0, T]
    double G_value = 0, F2_value = 0, A_value = 0;
    double action = 0;     // T (f(G) - f'(G) A)
    bool symmetric = false;
    SymplecticPath monodromy;  // linearized H-flow over [0, T]
    int mu_h = 0;
    int mu_shifted = 0;
};

struct OrbitOptions {
    int resolution = 256;        // samples per unit time of the monodromy path
    double rational_tol = 1e-9;
    long max_denominator = 64;
    double max_period = 40;      // NotClosed beyond this Reeb period
    double drift_tol = 1e-8;
    OdeOptions ode{};
};

// Closed H-orbit through x0 with its Reeb data; x0 = 0 is the constant orbit gamma_0.
OrbitRecord h_orbit(const Example& ex, const Vec& x0, const OrbitOptions& opt = {},
                    const IndexOptions& iopt = {});
// gamma_0 iterated k times: the explicit block path of d^2 H(0).
OrbitRecord gamma0_record(const Example& ex, int k = 1, const IndexOptions& iopt = {});

// Closed orbits drawn from rational (F(z_2), s(G)) pairs; deterministic in the seed.
std::vector<OrbitRecord> sample_orbits(const Example& ex, int count, std::uint64_t seed,
                                       const OrbitOptions& opt = {}, const IndexOptions& iopt = {});

int delta(double x, double tol = 1e-9);
int index_lower_bound(const Example& ex, const OrbitRecord& r);

struct MeanIndexRow {
    double mean = 0;    // shifted mean index of the Reeb orbit
    double bound = 0;   // b T
    bool ok = false;
};
struct MeanIndexReport {
    double b = 0;
    std::vector<MeanIndexRow> rows;
    MeanIndexRow gamma0;
    MeanIndexRow round_sphere;  // orbit of R_beta outside the chart
    int violations = 0;
};
MeanIndexReport mean_index_positivity_check(const Example& ex, const std::vector<OrbitRecord>& records,
                                            const IndexOptions& iopt = {});

// Reeb linearization of the perturbed gamma_0 over [0, 1] with the trivialization shift.
SymplecticPath perturbed_gamma0_path(const ExampleParams& p);
struct Gamma0Report {
    int mu = 0;
    int sdc = 0;
    int mu_unshifted = 0;  // mu(Gamma^2)
    int defect = 0;
};
Gamma0Report perturbed_gamma0(const ExampleParams& p, const IndexOptions& iopt = {});

struct ReturnScanOptions {
    int grid = 0;            // points per coordinate; 0 picks the largest odd count <= 41 within max_points
    long max_points = 100000;
    double radius = 0.05;
    double fixed_tol = 1e-12;  // relative residual counted as a 2-periodic point
};
struct ReturnScanReport {
    int grid = 0;
    long points = 0;
    double radius = 0;
    double max_time_residual = 0;
    std::vector<Vec> periodic_points;
    double min_relative_residual = 0;  // over nonzero grid points
    long cone_points = 0;              // nonzero z_1-axis points with q_1 p_1 > 0 in the scan
    long cone_decreasing = 0;          // of those, F(z_1) drops under one step
    long rotated_points = 0;           // points with z_i != 0, i >= 2
    long rotated_nonzero = 0;          // of those, every such z_i turns by a nonzero angle
    std::vector<std::pair<Vec, double>> field;  // (x, |P^2 x - x|) on the z_1 plane
    bool origin_unique() const { return periodic_points.size() == 1 && periodic_points[0].norm() == 0.0; }
};
// One step: the half-period return of H composed with the time-1/2 shear.
Vec return_step(const Example& ex, const Vec& x, double* time_residual = nullptr);
ReturnScanReport return_map_scan(const Example& ex, const ReturnScanOptions& opt = {});

struct CircleActionPaths {
    SymplecticPath phi_half;  // weights theta_i on [0, 1/2]
    SymplecticPath psi_bar;   // weights theta_i - eps on [0, 1/2]
    PathSpec phi_spec, psi_spec;
};
CircleActionPaths circle_action_paths(int n, double eps, const RealizeOptions& ropt = {});

struct ReebHamReport {
    int grid = 0;
    int shift_at_one = 0;   // B_gamma(1) - B(1)
    int mismatches = 0;     // grid points z != 1 with B_gamma(z) != B(z)
    bool b_equal = false;
    bool ok() const { return shift_at_one == 1 && mismatches == 0 && b_equal; }
};
// contact: path in Sp(2n); it is extended by the identity 2-block.
ReebHamReport reeb_ham_shift_check(const SymplecticPath& contact, int grid = 64, const IndexOptions& iopt = {});

struct ReparamRow {
    int mu_h = 0, mu_g = 0;
    bool ok = false;
};
struct ReparamReport {
    std::vector<ReparamRow> rows;
    int max_gap = 0;
    int violations = 0;
};
ReparamReport reparam_index_gap_check(const Example& ex, const std::vector<OrbitRecord>& records,
                                      const OrbitOptions& opt = {}, const IndexOptions& iopt = {});

// Orbits handed to the multiplicity replay: the perturbed gamma_0 and sampled orbits,
// each with its shifted Reeb path.
std::vector<OrbitData> gallery_orbit_set(const Example& ex, const std::vector<OrbitRecord>& records,
                                         const IndexOptions& iopt = {});

}  // namespace sympidx
