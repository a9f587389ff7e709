#pragma once

#include "sympidx/types.hpp"

#include <vector>

namespace sympidx {

// Standard structure on interleaved coordinates (q1,p1,...,qd,pd):
// J = diag([[0,-1],[1,0]], ...), omega(u,v) = <Ju, v>, Hamiltonian field J grad H.
Mat standard_j(int d);

// max |M^T J M - J|
double symplectic_defect(const Mat& m);

Mat symplectic_inverse(const Mat& m);

Mat matrix_exp(const Mat& a);

// exp(J S) for symmetric S.
Mat symplectic_exp(const Mat& s);

// 2x2 rotation by angle a, i.e. z -> e^{ia} z with z = q + ip.
Mat rotation2(double a);

Mat block_diag(const std::vector<Mat>& blocks);

// Blocks of the unitary attached to M in the complex basis diagonalizing iJ.
// With C^H M C = [[a, b], [c, d]] the unitary of z^{-1} M is
// U(z) = [[conj(z) (d - c a^{-1} b), c a^{-1}], [-a^{-1} b, z a^{-1}]].
struct UnitaryBlocks {
    CMat d0, e0, f0, a0inv;
};

UnitaryBlocks unitary_blocks(const Mat& m);
CMat unitary_at(const UnitaryBlocks& b, cplx z);

// z-independent bound on sqrt(2d) * |U_1(z) - U_0(z)|_F.
double unitary_step(const UnitaryBlocks& u0, const UnitaryBlocks& u1);

class SymplecticMatrix {
public:
    explicit SymplecticMatrix(Mat m, double tol = 1e-9);

    int dim_half() const { return static_cast<int>(m_.rows() / 2); }
    const Mat& matrix() const { return m_; }

    SymplecticMatrix inverse() const;
    SymplecticMatrix pow(int k) const;
    SymplecticMatrix operator*(const SymplecticMatrix& o) const;

private:
    Mat m_;
};

struct SpectrumOptions {
    double cluster_tol = 1e-3;
    double rank_tol = 1e-8;
};

struct CirclePoint {
    double angle;  // in [0, 2pi)
    int nu;
    int eta;
};

struct CircleSpectrum {
    std::vector<CirclePoint> points;  // sorted by angle
    int off_circle_count = 0;

    const CirclePoint* at(double angle, double tol) const;
    int nu_at(double angle, double tol) const;
    int eta_at(double angle, double tol) const;
};

CircleSpectrum circle_spectrum(const SymplecticMatrix& m, const SpectrumOptions& opt = {});

// dim ker(M - zI), singular values below rank_tol * max(1, |M|_2) count as zero.
int nullity(const Mat& m, cplx z, double rank_tol = 1e-8);

enum class BlockType { Identity, Q0, QPlus, QMinus };

const char* block_type_name(BlockType t);

struct NormalBlock {
    BlockType type;
    int dim;
};

struct Eigen1Decomposition {
    int dim_v = 0;
    int b_id = 0;
    int b_0 = 0;
    int b_plus = 0;
    int b_minus = 0;
    std::vector<NormalBlock> blocks;
    std::vector<int> jordan_sizes;  // Jordan block sizes of log on V, descending
};

Eigen1Decomposition eigen1_normal_form(const SymplecticMatrix& m, const SpectrumOptions& opt = {});

}  // namespace sympidx
