#pragma once

#include "sympidx/core.hpp"
#include "sympidx/path.hpp"

#include <map>
#include <utility>
#include <vector>

namespace sympidx {

struct IndexOptions {
    double snap_tol = 1e-7;       // eigen-angles of the endpoint unitary below this count as crossings
    double proximity_tol = 1e-5;  // angles in (snap_tol, proximity_tol) are unresolved
    double integer_tol = 1e-6;
    double step_guard = 1.0;      // max unitary step between samples
    double root_match_tol = 1e-7; // root of unity vs endpoint eigenvalue
    SpectrumOptions spectrum{};
};

// Bott function B(e^{i angle}) of the path.
int bott(const SymplecticPath& p, double angle, const IndexOptions& opt = {});
std::vector<int> bott_many(const SymplecticPath& p, const std::vector<double>& angles,
                           const IndexOptions& opt = {});
// B+(z) = -B_{Gamma^{-1}}(z)
int bott_plus(const SymplecticPath& p, double angle, const IndexOptions& opt = {});

int cz_index(const SymplecticPath& p, const IndexOptions& opt = {});
// Crossing-form index; half-integer, mu = mu_rs - nu_1/2.
double mu_rs(const SymplecticPath& p, const IndexOptions& opt = {});

// Piecewise-constant description of B on the circle. Breakpoints are the endpoint
// unit eigenvalues together with angle 0.
struct BottProfile {
    int dim_half = 0;
    std::vector<double> angles;   // breakpoints, ascending in [0, 2pi), angles[0] = 0
    std::vector<int> at;          // B at each breakpoint
    std::vector<int> arc;         // B on the open arc (angles[i], angles[i+1])
    std::vector<int> nu;          // nullity at each breakpoint
    std::vector<int> eta;
    double root_match_tol = 1e-7;

    int value(double angle) const;
    double mean() const;
    int splitting_plus(size_t i) const { return arc[i] - at[i]; }
    int splitting_minus(size_t i) const { return arc[(i + arc.size() - 1) % arc.size()] - at[i]; }
    std::pair<int, int> splitting(double angle) const;
    int nullity(double angle) const;

    // invariants of the m-th iterate through Bott's formula
    int mu_iterate(int m) const;
    int nu_iterate(int m) const;
    int splitting_plus_one_iterate(int m) const;  // S+_1(P^m)
    int defect_iterate(int m) const { return 2 * splitting_plus_one_iterate(m) - nu_iterate(m); }

    int mu() const { return at[0]; }
    int defect() const { return splitting_plus(0) * 2 - nu[0]; }
};

BottProfile bott_profile(const SymplecticPath& p, const IndexOptions& opt = {});

double mean_index(const SymplecticPath& p, const IndexOptions& opt = {});
std::pair<int, int> splitting_numbers(const SymplecticPath& p, double angle, const IndexOptions& opt = {});
int nullity_at(const SymplecticPath& p, double angle, const IndexOptions& opt = {});
// 2 S+_1 - nu_1 = b_- - b_+
int defect(const SymplecticPath& p, const IndexOptions& opt = {});
int sdc_value(const SymplecticPath& p, const IndexOptions& opt = {});

struct IndexReport {
    int mu = 0;
    double mu_rs = 0;
    double mean = 0;
    std::map<double, int> nu_z;
    std::map<double, int> eta_z;
    std::map<double, int> bott;
    std::map<double, int> bott_plus;
    std::map<double, std::pair<int, int>> splitting;
    int defect = 0;
};

// grid: number of equally spaced z-samples for bott / bott_plus (in addition to the
// endpoint eigenvalues).
IndexReport index_report(const SymplecticPath& p, int grid = 64, const IndexOptions& opt = {});

}  // namespace sympidx
