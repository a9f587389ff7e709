#pragma once

#include "sympidx/index.hpp"
#include "sympidx/path.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sympidx {

using Rng = std::mt19937_64;

struct RandomSpecOptions {
    int min_dim_half = 1;
    int max_dim_half = 4;
    double conjugate_probability = 0.6;
    double rational_probability = 0.6;  // rotation weights in (1/q) Z, q | 12
    bool positive_bias = false;         // favour positive rotation weights and generators
    bool allow_ode = true;              // polynomial generators integrated numerically
    double duration = 1.0;
    double max_endpoint_norm = 4.0;     // keeps the sixth iterate within double precision reach
    int probe_iterates = 1;             // iterates whose Bott data must resolve, with angles apart from the probes
    double separation = 1e-3;           // near-coincidences in (1e-9, separation) are rejected
};

Mat random_symmetric(Rng& rng, int dim, double scale);
Mat random_symplectic(Rng& rng, int dim_half, double scale);

// Direct sum of mixed blocks (rotations, shears, exp(tJQ), identity, nilpotent 4-blocks,
// polynomial generators), possibly conjugated by a random symplectic matrix.
PathSpec random_path_spec(Rng& rng, int dim_half, const RandomSpecOptions& opt = {});

struct DrawStats {
    long drawn = 0;
    long rejected = 0;  // endpoint norm cap, near-coincident iterate angles, ClusterAmbiguity or SpectralProximity
};

// Realizes random specs until the Bott data at the probe angles resolves.
SymplecticPath random_path(Rng& rng, int dim_half, const RandomSpecOptions& opt, const RealizeOptions& ropt,
                           const IndexOptions& iopt, const std::vector<double>& probe_angles, DrawStats* stats);

struct SuiteResult {
    std::string name;
    int cases = 0;
    int violations = 0;
    long rejected = 0;
    int degenerate = 0;  // cases with a unit endpoint eigenvalue at a point the suite probes
    int tight = 0;       // cases meeting the hypothesis with equality
    std::vector<std::string> failures;  // first few, with seed and case number
    double seconds = 0;
    bool passed() const { return cases > 0 && violations == 0; }
};

struct SuiteOptions {
    int count = 200;
    std::uint64_t seed = 1;
    int max_k = 6;
    int grid = 64;
    RealizeOptions realize{256, 0.25, 0.5, 1e-8, {}};
    IndexOptions index{};
};

// mu(Gamma^k) = sum_{z^k = 1} B(z), k <= max_k; root-of-unity inversion identities
SuiteResult bott_formula_suite(const SuiteOptions& opt = {});
// B(e^{i theta}) from B(1) and the splitting numbers; S+-_z = S-+_{conj z};
// S+-_z(P^k) = sum_{w^k = z} S+-_w(P), k <= 4
SuiteResult splitting_suite(const SuiteOptions& opt = {});
// A1 >= A2 pointwise implies B1 >= B2 on the grid
SuiteResult comparison_suite(const SuiteOptions& opt = {});
// mu(Gamma) >= n+1 in Sp(2n+2) implies mu(Gamma^2) + 2 S+_1 - nu >= n+1
SuiteResult sdc_second_iterate_suite(const SuiteOptions& opt = {});
// mu(Psi^2) - mu(Psi) >= n+1 implies the same conclusion
SuiteResult sdc_jump_suite(const SuiteOptions& opt = {});
// mu >= n implies mu(Gamma^k) + nu(Gamma^k) <= mu(Gamma^{k+1}), k <= 5
SuiteResult iteration_monotonicity_suite(const SuiteOptions& opt = {});
// B <= B+ everywhere, with equality off the endpoint spectrum
SuiteResult semicontinuity_suite(const SuiteOptions& opt = {});

std::vector<SuiteResult> run_all_suites(const SuiteOptions& opt = {});

}  // namespace sympidx
