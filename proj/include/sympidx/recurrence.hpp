#pragma once

#include "sympidx/index.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sympidx {

// Iterate data of one path: its Bott profile and endpoint.
struct IRTPath {
    BottProfile profile;
    Mat endpoint;

    int mu(int m) const;   // mu(Phi^m); m < 0 via mu(Phi^-l) = -(mu(Phi^l) + nu(Phi^l))
    int nu(int m) const;
    double mean() const { return profile.mean(); }

    struct BPair {
        int plus = 0, minus = 0;
        bool normal_form = true;  // false: minimal pair with the profile's difference
    };
    // b+-(Phi^l(1)), cached
    BPair b(int l) const;

private:
    mutable std::map<int, BPair> b_cache_;
};

IRTPath irt_path(const SymplecticPath& p, const IndexOptions& opt = {});

struct IRTCertificate {
    int d = 0;
    std::vector<int> k;
    double eta = 0.5;
    int ell0 = 1;
    int N = 1;
};

struct IRTLedgerEntry {
    int path = 0;
    int ell = 0;
    int mu_k_plus = 0;    // mu(Phi^{k+l})
    int mu_k_minus = 0;   // mu(Phi^{k-l})
    int mu_ell = 0;       // mu(Phi^l)
    int nu_ell = 0;
    int mu_minus_ell = 0; // mu(Phi^{-l})
    int nu_k_minus = 0;   // nu(Phi^{k-l})
    int b_plus = 0;       // b+(Phi^l(1))
    int b_minus = 0;
    bool normal_form = true;   // b+- from the normal form (else from the defect only)
    bool defect_agrees = true; // b- - b+ = 2 S+_1 - nu on Phi^l(1)
    bool cond_ii = false;
    bool cond_iii = false;
    bool route2 = false;       // mu(Phi^{k-l}) = d - (mu(Phi^l) + b- - b+) - nu(Phi^{k-l})
};

struct IRTLedger {
    bool precheck = false;
    std::string precheck_failure;
    std::vector<double> mean_gap;  // |mean(Phi^{k_i}) - d|
    std::vector<bool> cond_i;
    std::vector<IRTLedgerEntry> entries;
    bool route2_agrees = true;
    bool passed = false;
};

IRTLedger verify_irt(const std::vector<IRTPath>& paths, const IRTCertificate& cert);
IRTLedger verify_irt(const std::vector<SymplecticPath>& paths, const IRTCertificate& cert,
                     const IndexOptions& opt = {});

// Brute-force search over d (ascending, multiples of lcm(N, 2)) with k_i multiples of N,
// k_i <= k_bound. An empty result is not a refutation.
std::optional<IRTCertificate> find_irt(const std::vector<IRTPath>& paths, double eta, int ell0, int N,
                                       long k_bound = 100000);
std::optional<IRTCertificate> find_irt(const std::vector<SymplecticPath>& paths, double eta, int ell0, int N,
                                       long k_bound = 100000, const IndexOptions& opt = {});

// Per simple orbit data for the multiplicity arithmetic.
struct OrbitData {
    std::string name;
    bool symmetric = true;
    std::optional<IRTPath> simple;  // gamma
    std::optional<IRTPath> square;  // gamma^2, needed for non-symmetric orbits
    int b_plus = 0, b_minus = 0;    // b+-(gamma(1))
    int b_plus2 = 0, b_minus2 = 0;  // b+-(gamma^2(1))
};

OrbitData orbit_data(const std::string& name, bool symmetric, const SymplecticPath& p,
                     const IndexOptions& opt = {});

// Paths the certificate refers to: gamma_1..gamma_{r1+r2} (symmetric first), then the squares
// of the non-symmetric ones.
std::vector<IRTPath> replay_paths(const std::vector<OrbitData>& orbits);
std::vector<OrbitData> replay_order(const std::vector<OrbitData>& orbits);

struct WindowCheck {
    int s = 0;
    int level = 0;  // d - 2s + n + 2
    int orbit = 0;
    bool bound1 = false;    // level < mu(gamma^{k+1})
    bool bound23 = false;   // mu + nu of gamma^{k-1} (symmetric) or gamma^{k-2} < level
    bool pinned = false;    // level lies in the window of gamma^k (or gamma^{k-1} if non-symmetric)
};

struct OrbitReplay {
    std::string name;
    bool symmetric = true;
    bool hypothesis = false;  // mu >= n+1 and mu + b- - b+ >= n+1 (of gamma^2 when non-symmetric)
    bool irt1 = false, irt2 = false, irt3 = false;
    bool irt4 = true, irt5 = true, irt6 = true;
    bool claim = true;        // squeeze 2k' - 2 < k < 2k' + 2 and k = 2k'
    bool route2 = true;
};

struct ReplayReport {
    int n = 0;
    std::vector<OrbitReplay> orbits;
    std::vector<WindowCheck> windows;
    std::vector<bool> covered;  // per s: some orbit pins the level
    bool equations_hold = false;
    bool windows_consistent = false;
    bool hypotheses_hold = false;
    int r1 = 0, r2 = 0;
    bool count_claimed = false;  // only when every hypothesis holds
    bool count_flag = false;     // r1 + 2 r2 >= n+1
};

ReplayReport replay_multiplicity_arithmetic(const std::vector<OrbitData>& orbits, const IRTCertificate& cert,
                                            int n);

}  // namespace sympidx
