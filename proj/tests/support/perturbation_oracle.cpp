#include "perturbation_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace sympidx::oracle {

namespace {

CMat souriau(const Mat& m) {
    const int d = static_cast<int>(m.rows());
    Mat frame(2 * d, d);
    Mat r = Mat::Identity(d, d);
    for (int i = 1; i < d; i += 2) r(i, i) = -1.0;  // turns -omega into omega on the first factor
    frame.topRows(d) = r;
    frame.bottomRows(d) = m;
    const Mat q = Eigen::HouseholderQR<Mat>(frame).householderQ() * Mat::Identity(2 * d, d);
    CMat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = cplx(q(2 * i, j), q(2 * i + 1, j));
    return z * z.transpose();
}

struct Tracker {
    CMat base_inv;
    double winding = 0;
    double last = 0;
    bool started = false;

    void push(const Mat& m) {
        const double a = std::arg((base_inv * souriau(m)).determinant());
        if (started) {
            double d = a - last;
            while (d > kPi) d -= kTwoPi;
            while (d < -kPi) d += kTwoPi;
            if (std::abs(d) > 1.5) throw Error(ErrorKind::NonIntegerIndex, "oracle step too coarse");
            winding += d;
        }
        last = a;
        started = true;
    }
};

double finish(const Tracker& t, const Mat& end, int d, bool* degenerate) {
    Eigen::ComplexEigenSolver<CMat> es(t.base_inv * souriau(end), false);
    double sum = 0;
    *degenerate = false;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double a = std::arg(es.eigenvalues()[i]);
        if (a < 0) a += kTwoPi;
        if (std::min(a, kTwoPi - a) < 1e-9) *degenerate = true;
        sum += a;
    }
    return (t.winding - sum) / kTwoPi + 0.5 * d;
}

Tracker start(const std::vector<Mat>& samples) {
    Tracker t;
    const int d = static_cast<int>(samples.front().rows());
    t.base_inv = souriau(Mat::Identity(d, d)).adjoint();
    for (const auto& m : samples) t.push(m);
    return t;
}

}  // namespace

double graph_index(const std::vector<Mat>& samples) {
    const Tracker t = start(samples);
    bool deg = false;
    const double v = finish(t, samples.back(), static_cast<int>(samples.back().rows()), &deg);
    if (deg) throw Error(ErrorKind::SpectralProximity, "degenerate endpoint");
    return v;
}

PerturbationResult perturb_endpoint(const SymplecticPath& p, int count, double scale, std::uint64_t seed) {
    const int d = p.dim();
    const Tracker prefix = start(p.samples());
    const Mat j = standard_j(d / 2);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, scale);
    std::uniform_real_distribution<double> shift(-3.0 * scale, 3.0 * scale);
    PerturbationResult out;
    out.min = 1 << 30;
    out.max = -(1 << 30);
    for (int c = 0; c < count; ++c) {
        Mat s(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) s(a, b) = nd(rng);
        s = 0.5 * (s + s.transpose()) + shift(rng) * Mat::Identity(d, d);
        Tracker t = prefix;
        Mat end;
        for (int k = 1; k <= 8; ++k) {
            end = p.samples().back() * matrix_exp((k / 8.0) * j * s);
            t.push(end);
        }
        bool deg = false;
        const double v = finish(t, end, d, &deg);
        if (deg) {
            ++out.skipped;
            continue;
        }
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-6) throw Error(ErrorKind::NonIntegerIndex, "oracle index not an integer");
        out.min = std::min(out.min, static_cast<int>(r));
        out.max = std::max(out.max, static_cast<int>(r));
        ++out.used;
    }
    return out;
}

}  // namespace sympidx::oracle
