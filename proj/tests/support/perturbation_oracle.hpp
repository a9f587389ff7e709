#pragma once

#include "sympidx/path.hpp"

#include <cstdint>

namespace sympidx::oracle {

// Index of the graph of M(t) relative to the diagonal in R^{4n}, from the phases of the
// Souriau map Z Z^T of an orthonormal graph frame. Only valid for nondegenerate endpoints.
double graph_index(const std::vector<Mat>& samples);

struct PerturbationResult {
    int min = 0;
    int max = 0;
    int used = 0;     // perturbations with a nondegenerate endpoint
    int skipped = 0;
};

// Appends exp(tau J S), tau in [0, 1], with S a random symmetric matrix of size `scale`
// plus a random multiple of the identity up to three times that size, and takes
// the graph index of each perturbed path.
PerturbationResult perturb_endpoint(const SymplecticPath& p, int count, double scale, std::uint64_t seed);

}  // namespace sympidx::oracle
