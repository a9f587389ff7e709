#include "sympidx/core.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sympidx {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotSymplectic: return "NotSymplectic";
        case ErrorKind::ClusterAmbiguity: return "ClusterAmbiguity";
        case ErrorKind::NotTotallyDegenerateBlock: return "NotTotallyDegenerateBlock";
        case ErrorKind::LogFailure: return "LogFailure";
        case ErrorKind::DriftExceeded: return "DriftExceeded";
        case ErrorKind::NonIntegerIndex: return "NonIntegerIndex";
        case ErrorKind::UnresolvedCrossing: return "UnresolvedCrossing";
        case ErrorKind::SpectralProximity: return "SpectralProximity";
        case ErrorKind::NonPositiveMeanIndex: return "NonPositiveMeanIndex";
        case ErrorKind::MissingIterateData: return "MissingIterateData";
        case ErrorKind::NotClosed: return "NotClosed";
        case ErrorKind::OutsideChart: return "OutsideChart";
        case ErrorKind::ReturnTimeNoConvergence: return "ReturnTimeNoConvergence";
        case ErrorKind::EvenN: return "EvenN";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::Schema: return "Schema";
    }
    return "Error";
}

Mat standard_j(int d) {
    Mat j = Mat::Zero(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        j(2 * i, 2 * i + 1) = -1.0;
        j(2 * i + 1, 2 * i) = 1.0;
    }
    return j;
}

double symplectic_defect(const Mat& m) {
    const Mat j = standard_j(static_cast<int>(m.rows() / 2));
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

Mat symplectic_inverse(const Mat& m) {
    const Mat j = standard_j(static_cast<int>(m.rows() / 2));
    return -j * m.transpose() * j;
}

Mat matrix_exp(const Mat& a) { return a.exp(); }

Mat symplectic_exp(const Mat& s) {
    const Mat j = standard_j(static_cast<int>(s.rows() / 2));
    return matrix_exp(j * s);
}

Mat rotation2(double a) {
    Mat r(2, 2);
    const double c = std::cos(a), s = std::sin(a);
    r << c, -s, s, c;
    return r;
}

Mat block_diag(const std::vector<Mat>& blocks) {
    Eigen::Index n = 0;
    for (const auto& b : blocks) n += b.rows();
    Mat out = Mat::Zero(n, n);
    Eigen::Index off = 0;
    for (const auto& b : blocks) {
        out.block(off, off, b.rows(), b.cols()) = b;
        off += b.rows();
    }
    return out;
}

namespace {

CMat complex_basis(int d) {
    const double r = 1.0 / std::sqrt(2.0);
    CMat c = CMat::Zero(2 * d, 2 * d);
    for (int i = 0; i < d; ++i) {
        c(2 * i, i) = r;
        c(2 * i + 1, i) = cplx(0, r);
        c(2 * i, d + i) = r;
        c(2 * i + 1, d + i) = cplx(0, -r);
    }
    return c;
}

}  // namespace

UnitaryBlocks unitary_blocks(const Mat& m) {
    const int d = static_cast<int>(m.rows() / 2);
    thread_local int cached_d = -1;
    thread_local CMat c;
    if (cached_d != d) {
        c = complex_basis(d);
        cached_d = d;
    }
    const CMat mt = c.adjoint() * m.cast<cplx>() * c;
    const CMat a = mt.topLeftCorner(d, d), b = mt.topRightCorner(d, d);
    const CMat cc = mt.bottomLeftCorner(d, d), dd = mt.bottomRightCorner(d, d);
    UnitaryBlocks u;
    u.a0inv = a.partialPivLu().inverse();
    u.e0 = cc * u.a0inv;
    u.f0 = u.a0inv * b;
    u.d0 = dd - cc * u.f0;
    return u;
}

CMat unitary_at(const UnitaryBlocks& b, cplx z) {
    const auto d = b.d0.rows();
    CMat u(2 * d, 2 * d);
    u.topLeftCorner(d, d) = std::conj(z) * b.d0;
    u.topRightCorner(d, d) = b.e0;
    u.bottomLeftCorner(d, d) = -b.f0;
    u.bottomRightCorner(d, d) = z * b.a0inv;
    return u;
}

double unitary_step(const UnitaryBlocks& u0, const UnitaryBlocks& u1) {
    const double s = std::sqrt((u1.d0 - u0.d0).squaredNorm() + (u1.e0 - u0.e0).squaredNorm() +
                               (u1.f0 - u0.f0).squaredNorm() + (u1.a0inv - u0.a0inv).squaredNorm());
    return std::sqrt(2.0 * static_cast<double>(u0.d0.rows())) * s;
}

SymplecticMatrix::SymplecticMatrix(Mat m, double tol) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0 || m_.rows() % 2 != 0)
        throw Error(ErrorKind::NotSymplectic, "matrix must be square of positive even size");
    const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
    const double def = symplectic_defect(m_);
    if (!(def <= tol * scale * scale))
        throw Error(ErrorKind::NotSymplectic, "|M^T J M - J| = " + std::to_string(def));
    const double det = m_.determinant();
    if (!(std::abs(det - 1.0) <= 1e-9 * std::pow(scale, static_cast<double>(m_.rows()))))
        throw Error(ErrorKind::NotSymplectic, "det = " + std::to_string(det));
}

SymplecticMatrix SymplecticMatrix::inverse() const {
    return SymplecticMatrix(symplectic_inverse(m_), 1e-6);
}

SymplecticMatrix SymplecticMatrix::pow(int k) const {
    Mat base = k >= 0 ? m_ : symplectic_inverse(m_);
    int e = std::abs(k);
    Mat acc = Mat::Identity(m_.rows(), m_.cols());
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return SymplecticMatrix(acc, 1e-6);
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& o) const {
    return SymplecticMatrix(m_ * o.m_, 1e-6);
}

namespace {

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    if (a >= kTwoPi) a -= kTwoPi;
    return a;
}

double circ_dist(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

}  // namespace

const CirclePoint* CircleSpectrum::at(double angle, double tol) const {
    for (const auto& p : points)
        if (circ_dist(p.angle, angle) <= tol) return &p;
    return nullptr;
}

int CircleSpectrum::nu_at(double angle, double tol) const {
    const auto* p = at(angle, tol);
    return p ? p->nu : 0;
}

int CircleSpectrum::eta_at(double angle, double tol) const {
    const auto* p = at(angle, tol);
    return p ? p->eta : 0;
}

int nullity(const Mat& m, cplx z, double rank_tol) {
    const Eigen::Index n = m.rows();
    CMat a = m.cast<cplx>();
    a.diagonal().array() -= z;
    Eigen::JacobiSVD<CMat> svd(a);
    const auto& sv = svd.singularValues();
    const double scale = std::max(1.0, Eigen::JacobiSVD<Mat>(m).singularValues()(0));
    int k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (sv(i) <= rank_tol * scale) ++k;
    return k;
}

CircleSpectrum circle_spectrum(const SymplecticMatrix& sm, const SpectrumOptions& opt) {
    const Mat& m = sm.matrix();
    Eigen::EigenSolver<Mat> es(m, false);
    const CVec ev = es.eigenvalues();
    const double tol = opt.cluster_tol;

    std::vector<cplx> on;
    std::vector<cplx> off;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double r = std::abs(ev(i));
        if (std::abs(r - 1.0) <= tol)
            on.push_back(ev(i));
        else
            off.push_back(ev(i));
    }

    // single-linkage clusters
    const int k = static_cast<int>(on.size());
    std::vector<int> label(k);
    std::iota(label.begin(), label.end(), 0);
    auto find = [&](int x) {
        while (label[x] != x) x = label[x] = label[label[x]];
        return x;
    };
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (std::abs(on[a] - on[b]) <= tol) label[find(a)] = find(b);

    std::vector<std::vector<cplx>> clusters;
    std::vector<int> root_of(k, -1);
    for (int a = 0; a < k; ++a) {
        const int r = find(a);
        if (root_of[r] < 0) {
            root_of[r] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[root_of[r]].push_back(on[a]);
    }

    for (size_t a = 0; a < clusters.size(); ++a)
        for (size_t b = a + 1; b < clusters.size(); ++b)
            for (auto x : clusters[a])
                for (auto y : clusters[b])
                    if (std::abs(x - y) < 2 * tol)
                        throw Error(ErrorKind::ClusterAmbiguity,
                                    "eigenvalue clusters closer than 2*tol; shrink cluster_tol");
    for (const auto& c : clusters)
        for (auto x : c)
            for (auto y : off)
                if (std::abs(x - y) < 2 * tol)
                    throw Error(ErrorKind::ClusterAmbiguity,
                                "off-circle eigenvalue within 2*tol of a unit cluster");

    std::vector<double> angle(clusters.size());
    for (size_t a = 0; a < clusters.size(); ++a) {
        cplx mean = 0;
        for (auto x : clusters[a]) mean += x;
        mean /= static_cast<double>(clusters[a].size());
        // a cluster containing a conjugate pair is self-conjugate: centre is +-1
        bool self_conj = std::abs(mean.imag()) <= tol;
        if (self_conj)
            angle[a] = mean.real() > 0 ? 0.0 : kPi;
        else
            angle[a] = wrap_angle(std::arg(mean));
    }
    // exact mirror symmetry between conjugate clusters
    for (size_t a = 0; a < clusters.size(); ++a) {
        if (angle[a] == 0.0 || angle[a] == kPi || angle[a] > kPi) continue;
        for (size_t b = 0; b < clusters.size(); ++b) {
            if (b == a || angle[b] <= kPi) continue;
            if (circ_dist(angle[a], -angle[b]) <= 2 * tol &&
                clusters[a].size() == clusters[b].size()) {
                const double avg = 0.5 * (angle[a] + (kTwoPi - angle[b]));
                angle[a] = avg;
                angle[b] = kTwoPi - avg;
            }
        }
    }

    CircleSpectrum out;
    out.off_circle_count = static_cast<int>(off.size());
    for (size_t a = 0; a < clusters.size(); ++a) {
        const cplx z = std::polar(1.0, angle[a]);
        CirclePoint p;
        p.angle = angle[a];
        p.eta = static_cast<int>(clusters[a].size());
        p.nu = std::min(p.eta, std::max(1, nullity(m, z, opt.rank_tol)));
        out.points.push_back(p);
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const CirclePoint& x, const CirclePoint& y) { return x.angle < y.angle; });
    return out;
}

const char* block_type_name(BlockType t) {
    switch (t) {
        case BlockType::Identity: return "identity";
        case BlockType::Q0: return "Q0";
        case BlockType::QPlus: return "Q+";
        case BlockType::QMinus: return "Q-";
    }
    return "?";
}

namespace {

int numeric_rank(const Mat& a, double tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(a);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    return r;
}

Mat null_space(const Mat& a, double tol) {
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
    int r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++r;
    return svd.matrixV().rightCols(a.cols() - r);
}

// Real spectral projector onto the generalized eigenspace of the eigenvalues
// inside |z - 1| < rho, by the trapezoidal rule on the circle.
Mat spectral_projector(const Mat& m, double rho, int npts) {
    const Eigen::Index n = m.rows();
    CMat acc = CMat::Zero(n, n);
    const CMat mc = m.cast<cplx>();
    for (int k = 0; k < npts; ++k) {
        const cplx w = std::polar(rho, kTwoPi * (k + 0.5) / npts);
        CMat a = -mc;
        a.diagonal().array() += 1.0 + w;
        acc += w * a.partialPivLu().inverse();
    }
    return (acc / static_cast<double>(npts)).real();
}

}  // namespace

Eigen1Decomposition eigen1_normal_form(const SymplecticMatrix& sm, const SpectrumOptions& opt) {
    if (sm.dim_half() > 4)
        throw Error(ErrorKind::InvalidParams, "eigen1_normal_form supports dim_half <= 4");
    const Mat& m = sm.matrix();
    const Eigen::Index n = m.rows();
    Eigen::EigenSolver<Mat> es(m, false);
    const CVec ev = es.eigenvalues();

    double r_in = 0.0, r_out = std::numeric_limits<double>::infinity();
    int eta1 = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double d = std::abs(ev(i) - 1.0);
        if (d <= opt.cluster_tol) {
            ++eta1;
            r_in = std::max(r_in, d);
        } else {
            r_out = std::min(r_out, d);
        }
    }
    Eigen1Decomposition out;
    if (eta1 == 0) return out;
    if (eta1 % 2 != 0)
        throw Error(ErrorKind::NotTotallyDegenerateBlock, "odd algebraic multiplicity at 1");

    double rho, ratio;
    if (std::isfinite(r_out)) {
        rho = std::sqrt(std::max(r_in, 1e-12) * r_out);
        rho = std::min(rho, 0.5 * r_out + 0.5 * std::max(r_in, 1e-12));
        ratio = std::max(std::max(r_in, 1e-12) / rho, rho / r_out);
    } else {
        rho = 0.5;
        ratio = std::max(r_in, 1e-12) / rho;
    }
    int npts = 64;
    if (ratio > 0 && ratio < 1) npts = static_cast<int>(std::ceil(std::log(1e-16) / std::log(ratio)));
    npts = std::clamp(npts, 64, 8192);
    const Mat proj = spectral_projector(m, rho, npts);

    Eigen::JacobiSVD<Mat> psvd(proj, Eigen::ComputeFullU);
    const Mat b = psvd.matrixU().leftCols(eta1);
    const Mat av = b.transpose() * m * b;
    if ((m * b - b * av).norm() > 1e-6 * std::max(1.0, m.norm()))
        throw Error(ErrorKind::NotTotallyDegenerateBlock, "eigenvalue-one subspace is not invariant");

    const Mat j = standard_j(static_cast<int>(n / 2));
    const Mat omega_v = -(b.transpose() * j * b);  // omega(Bx, By) = x^T omega_v y

    const Mat id = Mat::Identity(eta1, eta1);
    const Mat nil = av - id;
    Mat npow = id;
    for (int k = 0; k < eta1; ++k) npow = npow * nil;
    if (npow.norm() > 1e-6 * std::pow(std::max(1.0, nil.norm()), eta1))
        throw Error(ErrorKind::NotTotallyDegenerateBlock, "restriction has an eigenvalue != 1");

    Mat x = Mat::Zero(eta1, eta1);
    Mat term = id;
    for (int k = 1; k <= eta1; ++k) {
        term = term * nil;
        x += ((k % 2 == 1) ? 1.0 : -1.0) / k * term;
    }
    if (!x.allFinite() || (matrix_exp(x) - av).norm() > 1e-8 * std::max(1.0, av.norm()))
        throw Error(ErrorKind::LogFailure, "nilpotent logarithm does not reproduce the block");

    const double xn = std::max(1.0, x.norm());
    std::vector<int> rank(eta1 + 2, 0);
    std::vector<Mat> xp(eta1 + 2);
    xp[0] = id;
    rank[0] = eta1;
    for (int k = 1; k <= eta1 + 1; ++k) {
        xp[k] = xp[k - 1] * x;
        rank[k] = numeric_rank(xp[k], 1e-7 * std::pow(xn, k));
    }
    // m_s = number of Jordan blocks of size exactly s
    std::vector<int> count(eta1 + 2, 0);
    int total = 0;
    for (int s = 1; s <= eta1; ++s) {
        const int ge_s = rank[s - 1] - rank[s];
        const int ge_s1 = rank[s] - rank[s + 1];
        count[s] = ge_s - ge_s1;
        if (count[s] < 0) throw Error(ErrorKind::LogFailure, "inconsistent Jordan ranks");
        total += s * count[s];
    }
    if (total != eta1) throw Error(ErrorKind::LogFailure, "Jordan sizes do not fill the block");

    out.dim_v = eta1;
    for (int s = eta1; s >= 1; --s)
        for (int c = 0; c < count[s]; ++c) out.jordan_sizes.push_back(s);

    for (int s = 1; s <= eta1; ++s) {
        if (count[s] == 0) continue;
        if (s % 2 == 1) {
            if (count[s] % 2 != 0) throw Error(ErrorKind::LogFailure, "unpaired odd Jordan block");
            const int pairs = count[s] / 2;
            if (s == 1) {
                out.b_id += pairs;
                for (int c = 0; c < pairs; ++c) out.blocks.push_back({BlockType::Identity, 2});
            } else {
                out.b_0 += pairs;
                for (int c = 0; c < pairs; ++c) out.blocks.push_back({BlockType::Q0, 2 * s});
            }
            continue;
        }
        const int d = s / 2;
        const Mat ker = null_space(xp[s], 1e-7 * std::pow(xn, s));
        Mat g = ker.transpose() * omega_v * xp[s - 1] * ker;
        g = 0.5 * (g + g.transpose());
        if (d % 2 == 0) g = -g;
        Eigen::SelfAdjointEigenSolver<Mat> ges(g);
        const auto& lam = ges.eigenvalues();
        const double lmax = lam.cwiseAbs().maxCoeff();
        int pos = 0, neg = 0;
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            if (lam(i) > 1e-6 * lmax) ++pos;
            if (lam(i) < -1e-6 * lmax) ++neg;
        }
        if (pos + neg != count[s])
            throw Error(ErrorKind::LogFailure, "sign form rank disagrees with Jordan count");
        const int paired = std::min(pos, neg);
        out.b_0 += paired;
        out.b_plus += pos - paired;
        out.b_minus += neg - paired;
        for (int c = 0; c < paired; ++c) out.blocks.push_back({BlockType::Q0, 2 * s});
        for (int c = 0; c < pos - paired; ++c) out.blocks.push_back({BlockType::QPlus, s});
        for (int c = 0; c < neg - paired; ++c) out.blocks.push_back({BlockType::QMinus, s});
    }
    return out;
}

}  // namespace sympidx
