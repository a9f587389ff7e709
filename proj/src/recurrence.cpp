#include "sympidx/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sympidx {

int IRTPath::mu(int m) const {
    if (m > 0) return profile.mu_iterate(m);
    if (m < 0) return -(profile.mu_iterate(-m) + profile.nu_iterate(-m));
    throw Error(ErrorKind::InvalidParams, "iterate 0 has no index");
}

int IRTPath::nu(int m) const {
    if (m == 0) throw Error(ErrorKind::InvalidParams, "iterate 0 has no nullity");
    return profile.nu_iterate(std::abs(m));
}

IRTPath irt_path(const SymplecticPath& p, const IndexOptions& opt) {
    IRTPath out;
    out.profile = bott_profile(p, opt);
    out.endpoint = p.samples().back();
    return out;
}

namespace {

Mat matrix_power(const Mat& m, int k) {
    Mat acc = Mat::Identity(m.rows(), m.cols());
    Mat base = m;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

using BPair = IRTPath::BPair;

// b+-(M) from the normal form, or the minimal pair with the right difference beyond the
// normal-form size limit.
BPair b_pair(const Mat& m, int defect) {
    BPair b;
    if (m.rows() <= 8) {
        const Eigen1Decomposition e = eigen1_normal_form(SymplecticMatrix(m, 1e-6));
        b.plus = e.b_plus;
        b.minus = e.b_minus;
        return b;
    }
    b.normal_form = false;
    b.minus = std::max(0, defect);
    b.plus = std::max(0, -defect);
    return b;
}

}  // namespace

IRTPath::BPair IRTPath::b(int l) const {
    auto it = b_cache_.find(l);
    if (it != b_cache_.end()) return it->second;
    const BPair v = b_pair(matrix_power(endpoint, l), profile.defect_iterate(l));
    b_cache_.emplace(l, v);
    return v;
}

IRTLedger verify_irt(const std::vector<IRTPath>& paths, const IRTCertificate& cert) {
    IRTLedger led;
    if (paths.empty()) throw Error(ErrorKind::NonPositiveMeanIndex, "no paths given");
    for (const auto& p : paths)
        if (!(p.mean() > 0)) throw Error(ErrorKind::NonPositiveMeanIndex, "mean index must be positive");

    auto fail = [&](const std::string& why) {
        led.precheck = false;
        led.precheck_failure = why;
        led.passed = false;
        return led;
    };
    if (cert.d <= 0 || cert.d % 2 != 0) return fail("d must be even and positive");
    if (cert.N <= 0 || cert.d % cert.N != 0) return fail("N must divide d");
    if (cert.k.size() != paths.size()) return fail("one k per path is required");
    if (cert.ell0 < 1) return fail("ell0 must be >= 1");
    if (!(cert.eta > 0)) return fail("eta must be positive");
    for (int k : cert.k) {
        if (k <= 0 || k % cert.N != 0) return fail("N must divide every k_i");
        if (k <= cert.ell0) return fail("k_i must exceed ell0");
    }
    led.precheck = true;

    bool ok = true;
    for (size_t i = 0; i < paths.size(); ++i) {
        const IRTPath& p = paths[i];
        const int k = cert.k[i];
        const double gap = std::abs(k * p.mean() - cert.d);
        led.mean_gap.push_back(gap);
        led.cond_i.push_back(gap < cert.eta);
        ok = ok && led.cond_i.back();
        for (int l = 1; l <= cert.ell0; ++l) {
            IRTLedgerEntry e;
            e.path = static_cast<int>(i);
            e.ell = l;
            e.mu_k_plus = p.mu(k + l);
            e.mu_k_minus = p.mu(k - l);
            e.mu_ell = p.mu(l);
            e.nu_ell = p.nu(l);
            e.mu_minus_ell = p.mu(-l);
            e.nu_k_minus = p.nu(k - l);
            const int dfct = p.profile.defect_iterate(l);
            const BPair b = p.b(l);
            e.b_plus = b.plus;
            e.b_minus = b.minus;
            e.normal_form = b.normal_form;
            e.defect_agrees = (b.minus - b.plus) == dfct;
            e.cond_ii = e.mu_k_plus == cert.d + e.mu_ell;
            e.cond_iii = e.defect_agrees && e.mu_k_minus == cert.d + e.mu_minus_ell + (e.b_plus - e.b_minus);
            e.route2 = e.mu_k_minus == cert.d - (e.mu_ell + e.b_minus - e.b_plus) - e.nu_k_minus;
            led.route2_agrees = led.route2_agrees && e.route2;
            ok = ok && e.cond_ii && e.cond_iii;
            led.entries.push_back(e);
        }
    }
    led.passed = ok;
    return led;
}

IRTLedger verify_irt(const std::vector<SymplecticPath>& paths, const IRTCertificate& cert,
                     const IndexOptions& opt) {
    std::vector<IRTPath> ps;
    for (const auto& p : paths) ps.push_back(irt_path(p, opt));
    return verify_irt(ps, cert);
}

std::optional<IRTCertificate> find_irt(const std::vector<IRTPath>& paths, double eta, int ell0, int N,
                                       long k_bound) {
    if (paths.empty()) throw Error(ErrorKind::NonPositiveMeanIndex, "no paths given");
    if (N < 1 || ell0 < 1 || !(eta > 0)) throw Error(ErrorKind::InvalidParams, "need N >= 1, ell0 >= 1, eta > 0");
    double min_mean = std::numeric_limits<double>::infinity();
    for (const auto& p : paths) {
        if (!(p.mean() > 0)) throw Error(ErrorKind::NonPositiveMeanIndex, "mean index must be positive");
        min_mean = std::min(min_mean, p.mean());
    }
    const long step = std::lcm(static_cast<long>(N), 2L);
    for (long d = step;; d += step) {
        if ((d - eta) / min_mean > static_cast<double>(k_bound)) return std::nullopt;
        std::vector<std::vector<int>> cand(paths.size());
        bool any_empty = false;
        for (size_t i = 0; i < paths.size(); ++i) {
            const double mu = paths[i].mean();
            const long lo = static_cast<long>(std::ceil((d - eta) / mu / N));
            const long hi = static_cast<long>(std::floor((d + eta) / mu / N));
            for (long q = std::max(1L, lo); q <= hi; ++q) {
                const long k = q * N;
                if (k > k_bound || k <= ell0) continue;
                if (std::abs(k * mu - d) < eta) cand[i].push_back(static_cast<int>(k));
            }
            if (cand[i].empty()) any_empty = true;
        }
        if (any_empty) continue;
        std::vector<size_t> idx(paths.size(), 0);
        while (true) {
            IRTCertificate c;
            c.d = static_cast<int>(d);
            c.eta = eta;
            c.ell0 = ell0;
            c.N = N;
            for (size_t i = 0; i < paths.size(); ++i) c.k.push_back(cand[i][idx[i]]);
            if (verify_irt(paths, c).passed) return c;
            size_t j = 0;
            while (j < idx.size() && ++idx[j] == cand[j].size()) idx[j++] = 0;
            if (j == idx.size()) break;
        }
    }
}

std::optional<IRTCertificate> find_irt(const std::vector<SymplecticPath>& paths, double eta, int ell0, int N,
                                       long k_bound, const IndexOptions& opt) {
    std::vector<IRTPath> ps;
    for (const auto& p : paths) ps.push_back(irt_path(p, opt));
    return find_irt(ps, eta, ell0, N, k_bound);
}

// ---------------------------------------------------------------------------

OrbitData orbit_data(const std::string& name, bool symmetric, const SymplecticPath& p, const IndexOptions& opt) {
    OrbitData o;
    o.name = name;
    o.symmetric = symmetric;
    o.simple = irt_path(p, opt);
    const BPair b1 = o.simple->b(1);
    o.b_plus = b1.plus;
    o.b_minus = b1.minus;
    o.square = irt_path(iterate(p, 2), opt);
    const BPair b2 = o.simple->b(2);
    o.b_plus2 = b2.plus;
    o.b_minus2 = b2.minus;
    return o;
}

std::vector<OrbitData> replay_order(const std::vector<OrbitData>& orbits) {
    std::vector<OrbitData> out;
    for (const auto& o : orbits)
        if (o.symmetric) out.push_back(o);
    for (const auto& o : orbits)
        if (!o.symmetric) out.push_back(o);
    return out;
}

std::vector<IRTPath> replay_paths(const std::vector<OrbitData>& orbits) {
    const auto ord = replay_order(orbits);
    std::vector<IRTPath> out;
    for (const auto& o : ord) {
        if (!o.simple) throw Error(ErrorKind::MissingIterateData, "orbit " + o.name + " has no iterate data");
        out.push_back(*o.simple);
    }
    for (const auto& o : ord) {
        if (o.symmetric) continue;
        if (!o.square) throw Error(ErrorKind::MissingIterateData, "orbit " + o.name + " has no square data");
        out.push_back(*o.square);
    }
    return out;
}

ReplayReport replay_multiplicity_arithmetic(const std::vector<OrbitData>& orbits_in, const IRTCertificate& cert,
                                            int n) {
    const auto orbits = replay_order(orbits_in);
    ReplayReport rep;
    rep.n = n;
    for (const auto& o : orbits) (o.symmetric ? rep.r1 : rep.r2)++;
    if (cert.k.size() != static_cast<size_t>(rep.r1 + 2 * rep.r2))
        throw Error(ErrorKind::MissingIterateData, "certificate needs one k per orbit plus one per square");
    const int d = cert.d;

    rep.equations_hold = true;
    rep.hypotheses_hold = true;
    for (size_t i = 0; i < orbits.size(); ++i) {
        const OrbitData& o = orbits[i];
        if (!o.simple) throw Error(ErrorKind::MissingIterateData, "orbit " + o.name + " has no iterate data");
        const IRTPath& g = *o.simple;
        const int k = cert.k[i];
        OrbitReplay r;
        r.name = o.name;
        r.symmetric = o.symmetric;
        const int mu1 = g.mu(1);
        r.irt1 = g.mu(k + 1) == d + mu1;
        r.irt2 = g.mu(k - 1) == d + g.mu(-1) + o.b_plus - o.b_minus;
        r.route2 = g.mu(k - 1) == d - (mu1 + o.b_minus - o.b_plus) - g.nu(k - 1);
        r.irt3 = d - n <= g.mu(k) && g.mu(k) + g.nu(k) <= d + n;
        r.hypothesis = mu1 >= n + 1;
        if (o.symmetric) {
            r.hypothesis = r.hypothesis && mu1 + o.b_minus - o.b_plus >= n + 1;
        } else {
            if (!o.square) throw Error(ErrorKind::MissingIterateData, "orbit " + o.name + " has no square data");
            const size_t j = orbits.size() + (i - static_cast<size_t>(rep.r1));
            const int k2 = cert.k[j];
            const int mu2 = g.mu(2);
            r.irt4 = g.mu(2 * (k2 + 1)) == d + mu2;
            r.irt5 = g.mu(2 * (k2 - 1)) == d - (mu2 + g.nu(2)) + o.b_plus2 - o.b_minus2;
            r.route2 = r.route2 && g.mu(2 * (k2 - 1)) == d - (mu2 + o.b_minus2 - o.b_plus2) - g.nu(2 * (k2 - 1));
            r.irt6 = d - n <= g.mu(2 * k2) && g.mu(2 * k2) + g.nu(2 * k2) <= d + n;
            r.claim = 2 * k2 - 2 < k && k < 2 * k2 + 2 && k == 2 * k2;
            r.hypothesis = r.hypothesis && mu2 + o.b_minus2 - o.b_plus2 >= n + 1;
        }
        rep.equations_hold = rep.equations_hold && r.irt1 && r.irt2 && r.irt3 && r.irt4 && r.irt5 && r.irt6 && r.claim;
        rep.hypotheses_hold = rep.hypotheses_hold && r.hypothesis;
        rep.orbits.push_back(r);
    }

    rep.windows_consistent = true;
    for (int s = 1; s <= n + 1; ++s) {
        const int level = d - 2 * s + n + 2;
        bool covered = false;
        for (size_t i = 0; i < orbits.size(); ++i) {
            const OrbitData& o = orbits[i];
            const IRTPath& g = *o.simple;
            const int k = cert.k[i];
            WindowCheck w;
            w.s = s;
            w.level = level;
            w.orbit = static_cast<int>(i);
            w.bound1 = level <= d + n && d + n < d + g.mu(1) && d + g.mu(1) == g.mu(k + 1);
            if (o.symmetric) {
                const int top = g.mu(k - 1) + g.nu(k - 1);
                w.bound23 = top == d - (g.mu(1) + o.b_minus - o.b_plus) && top <= d - n - 1 && d - n - 1 < level;
                w.pinned = g.mu(k) <= level && level <= g.mu(k) + g.nu(k);
            } else {
                const int top = g.mu(k - 2) + g.nu(k - 2);
                w.bound23 = top == d - (g.mu(2) + o.b_minus2 - o.b_plus2) && top <= d - n - 1 && d - n - 1 < level;
                w.pinned = (g.mu(k) <= level && level <= g.mu(k) + g.nu(k)) ||
                           (g.mu(k - 1) <= level && level <= g.mu(k - 1) + g.nu(k - 1));
            }
            covered = covered || w.pinned;
            if (rep.orbits[i].hypothesis && !(w.bound1 && w.bound23)) rep.windows_consistent = false;
            rep.windows.push_back(w);
        }
        rep.covered.push_back(covered);
    }
    rep.count_claimed = rep.hypotheses_hold && rep.equations_hold;
    rep.count_flag = rep.count_claimed && rep.r1 + 2 * rep.r2 >= n + 1;
    return rep;
}

}  // namespace sympidx
