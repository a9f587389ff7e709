#include "sympidx/index.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sympidx {

namespace {

double wrap(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

double wrap_pi(double a) {
    a = std::fmod(a + kPi, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a - kPi;
}

struct Angles {
    double sum = 0;
    int zeros = 0;
};

Angles eigen_angles(const CMat& u, const IndexOptions& opt, const char* where) {
    Eigen::ComplexEigenSolver<CMat> es(u, false);
    Angles out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double a = wrap(std::arg(es.eigenvalues()[i]));
        const double dist = std::min(a, kTwoPi - a);
        if (dist <= opt.snap_tol) {
            ++out.zeros;
            continue;
        }
        if (dist < opt.proximity_tol)
            throw Error(ErrorKind::SpectralProximity,
                        std::string("z is within ") + std::to_string(dist) + " of a crossing at the " + where);
        out.sum += a;
    }
    return out;
}

// Spectral flow of the unitaries U_t(z) through 1, counted with the lower semicontinuous
// endpoint convention.
class Engine {
public:
    Engine(const SymplecticPath& p, const IndexOptions& opt) : opt_(opt), d_(p.dim_half()) {
        blocks_.reserve(p.size());
        for (size_t i = 0; i < p.size(); ++i) blocks_.push_back(unitary_blocks(p[i]));
        for (size_t i = 1; i < blocks_.size(); ++i)
            if (unitary_step(blocks_[i - 1], blocks_[i]) > opt.step_guard)
                throw Error(ErrorKind::NonIntegerIndex,
                            "resolution: sample spacing too coarse near t=" + std::to_string(p.times()[i]));
    }

    struct Raw {
        long k;
        int m0;
        int mt;
    };

    Raw run(double angle) const {
        const cplx z = std::polar(1.0, angle);
        double w = 0;
        double prev = std::arg(unitary_at(blocks_.front(), z).partialPivLu().determinant());
        for (size_t i = 1; i < blocks_.size(); ++i) {
            const double cur = std::arg(unitary_at(blocks_[i], z).partialPivLu().determinant());
            w += wrap_pi(cur - prev);
            prev = cur;
        }
        const Angles a0 = eigen_angles(unitary_at(blocks_.front(), z), opt_, "start");
        const Angles at = eigen_angles(unitary_at(blocks_.back(), z), opt_, "endpoint");
        const double kf = (a0.sum + w - at.sum) / kTwoPi;
        const double kr = std::round(kf);
        if (std::abs(kf - kr) > opt_.integer_tol)
            throw Error(ErrorKind::NonIntegerIndex, "winding residue " + std::to_string(kf - kr));
        return {static_cast<long>(kr), a0.zeros, at.zeros};
    }

    int bott(double angle) const {
        const Raw r = run(angle);
        if (r.m0 % 2 != 0) throw Error(ErrorKind::NonIntegerIndex, "odd nullity at the start");
        return static_cast<int>(r.k - r.mt + r.m0 / 2);
    }

    int dim_half() const { return d_; }

private:
    IndexOptions opt_;
    int d_;
    std::vector<UnitaryBlocks> blocks_;
};

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

}  // namespace

int bott(const SymplecticPath& p, double angle, const IndexOptions& opt) {
    return Engine(p, opt).bott(wrap(angle));
}

std::vector<int> bott_many(const SymplecticPath& p, const std::vector<double>& angles, const IndexOptions& opt) {
    Engine e(p, opt);
    std::vector<int> out;
    out.reserve(angles.size());
    for (double a : angles) out.push_back(e.bott(wrap(a)));
    return out;
}

int bott_plus(const SymplecticPath& p, double angle, const IndexOptions& opt) {
    return -bott(inverse(p), angle, opt);
}

int cz_index(const SymplecticPath& p, const IndexOptions& opt) { return bott(p, 0.0, opt); }

double mu_rs(const SymplecticPath& p, const IndexOptions& opt) {
    const Engine e(p, opt);
    const auto r = e.run(0.0);
    return static_cast<double>(r.k) + e.dim_half() - 0.5 * r.mt;
}

// ---------------------------------------------------------------------------

int BottProfile::value(double angle) const {
    angle = wrap(angle);
    for (size_t i = 0; i < angles.size(); ++i) {
        const double dd = std::abs(angle - angles[i]);
        if (std::min(dd, kTwoPi - dd) <= root_match_tol) return at[i];
    }
    size_t i = angles.size() - 1;
    while (angles[i] > angle) --i;
    return arc[i];
}

double BottProfile::mean() const {
    double s = 0;
    for (size_t i = 0; i < angles.size(); ++i) {
        const double end = i + 1 < angles.size() ? angles[i + 1] : kTwoPi;
        s += arc[i] * (end - angles[i]);
    }
    return s / kTwoPi;
}

std::pair<int, int> BottProfile::splitting(double angle) const {
    angle = wrap(angle);
    for (size_t i = 0; i < angles.size(); ++i) {
        const double dd = std::abs(angle - angles[i]);
        if (std::min(dd, kTwoPi - dd) <= root_match_tol) return {splitting_plus(i), splitting_minus(i)};
    }
    return {0, 0};
}

int BottProfile::nullity(double angle) const {
    angle = wrap(angle);
    for (size_t i = 0; i < angles.size(); ++i) {
        const double dd = std::abs(angle - angles[i]);
        if (std::min(dd, kTwoPi - dd) <= root_match_tol) return nu[i];
    }
    return 0;
}

int BottProfile::mu_iterate(int m) const {
    if (m < 1) throw Error(ErrorKind::InvalidParams, "iterate must be >= 1");
    const double scale = m / kTwoPi;
    const double tol = root_match_tol * scale;
    long total = 0;
    for (size_t i = 0; i < angles.size(); ++i) {
        const double x = angles[i] * scale;
        const double y = (i + 1 < angles.size() ? angles[i + 1] : kTwoPi) * scale;
        if (near_integer(x, tol)) total += at[i];
        const long lo = static_cast<long>(std::floor(x + tol)) + 1;
        const long hi = static_cast<long>(std::ceil(y - tol)) - 1;
        if (hi >= lo) total += static_cast<long>(arc[i]) * (hi - lo + 1);
    }
    return static_cast<int>(total);
}

int BottProfile::nu_iterate(int m) const {
    int s = 0;
    for (size_t i = 0; i < angles.size(); ++i)
        if (near_integer(angles[i] * m / kTwoPi, root_match_tol * m / kTwoPi)) s += nu[i];
    return s;
}

int BottProfile::splitting_plus_one_iterate(int m) const {
    int s = 0;
    for (size_t i = 0; i < angles.size(); ++i)
        if (near_integer(angles[i] * m / kTwoPi, root_match_tol * m / kTwoPi)) s += splitting_plus(i);
    return s;
}

BottProfile bott_profile(const SymplecticPath& p, const IndexOptions& opt) {
    const CircleSpectrum cs = circle_spectrum(p.endpoint(), opt.spectrum);
    BottProfile bp;
    bp.dim_half = p.dim_half();
    bp.root_match_tol = opt.root_match_tol;
    bp.angles.push_back(0.0);
    bp.nu.push_back(0);
    bp.eta.push_back(0);
    for (const auto& pt : cs.points) {
        if (pt.angle == 0.0) {
            bp.nu[0] = pt.nu;
            bp.eta[0] = pt.eta;
            continue;
        }
        bp.angles.push_back(pt.angle);
        bp.nu.push_back(pt.nu);
        bp.eta.push_back(pt.eta);
    }
    const size_t nb = bp.angles.size();
    std::vector<double> probe(bp.angles);
    for (size_t i = 0; i < nb; ++i) {
        const double end = i + 1 < nb ? bp.angles[i + 1] : kTwoPi;
        probe.push_back(0.5 * (bp.angles[i] + end));
    }
    const std::vector<int> v = bott_many(p, probe, opt);
    bp.at.assign(v.begin(), v.begin() + static_cast<long>(nb));
    bp.arc.assign(v.begin() + static_cast<long>(nb), v.end());
    return bp;
}

double mean_index(const SymplecticPath& p, const IndexOptions& opt) { return bott_profile(p, opt).mean(); }

std::pair<int, int> splitting_numbers(const SymplecticPath& p, double angle, const IndexOptions& opt) {
    return bott_profile(p, opt).splitting(angle);
}

int nullity_at(const SymplecticPath& p, double angle, const IndexOptions& opt) {
    return nullity(p.samples().back(), std::polar(1.0, angle), opt.spectrum.rank_tol);
}

int defect(const SymplecticPath& p, const IndexOptions& opt) { return bott_profile(p, opt).defect(); }

int sdc_value(const SymplecticPath& p, const IndexOptions& opt) {
    const BottProfile b = bott_profile(p, opt);
    return b.mu() + b.defect();
}

IndexReport index_report(const SymplecticPath& p, int grid, const IndexOptions& opt) {
    const BottProfile b = bott_profile(p, opt);
    const BottProfile bi = bott_profile(inverse(p), opt);
    IndexReport r;
    r.mu = b.mu();
    r.mu_rs = b.mu() + 0.5 * b.nu[0];
    r.mean = b.mean();
    r.defect = b.defect();
    std::vector<double> zs;
    for (int j = 0; j < grid; ++j) zs.push_back(kTwoPi * j / grid);
    for (size_t i = 0; i < b.angles.size(); ++i) {
        if (b.nu[i] > 0) {
            r.nu_z[b.angles[i]] = b.nu[i];
            r.eta_z[b.angles[i]] = b.eta[i];
            r.splitting[b.angles[i]] = {b.splitting_plus(i), b.splitting_minus(i)};
        }
        zs.push_back(b.angles[i]);
    }
    for (double z : zs) {
        r.bott[z] = b.value(z);
        r.bott_plus[z] = -bi.value(z);
    }
    return r;
}

}  // namespace sympidx
