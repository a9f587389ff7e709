#pragma once

#include "sympidx/core.hpp"
#include "sympidx/ode.hpp"

#include <functional>
#include <memory>
#include <variant>
#include <vector>

namespace sympidx {

struct PathSpec;

struct RotationBody {
    double weight;  // turns per unit time: z -> e^{2 pi i weight t} z
};
struct ShearBody {
    double slope;  // (1, slope*t; 0, 1)
};
struct GeneratorBody {
    std::vector<Mat> coeffs;  // A(t) = sum_k coeffs[k] t^k, symmetric
};
struct DirectSumBody {
    std::vector<PathSpec> children;
};
struct IterateBody {
    std::vector<PathSpec> child;  // exactly one
    int k;
};
struct InverseBody {
    std::vector<PathSpec> child;
};
struct ConcatenateBody {
    std::vector<PathSpec> children;
};
struct LoopMultiplyBody {
    std::vector<int> weights;  // full turns per 2-block over the child's duration
    std::vector<PathSpec> child;
};
struct HalfPeriodExtendBody {
    std::vector<PathSpec> child;
};
struct ProductBody {
    std::vector<PathSpec> children;  // pointwise product children[0](t) * children[1](t) * ...
};
struct ConjugateBody {
    Mat c;  // symplectic
    std::vector<PathSpec> child;
};

using PathBody = std::variant<RotationBody, ShearBody, GeneratorBody, DirectSumBody, IterateBody,
                              InverseBody, ConcatenateBody, LoopMultiplyBody, HalfPeriodExtendBody,
                              ProductBody, ConjugateBody>;

struct PathSpec {
    double duration = 1.0;
    PathBody body;
};

namespace spec {
PathSpec rotation(double weight, double duration);
PathSpec shear(double slope, double duration);
PathSpec generator(std::vector<Mat> coeffs, double duration);
PathSpec exponential(const Mat& s, double duration);  // exp(t J S)
PathSpec identity(int dim_half, double duration);
PathSpec direct_sum(std::vector<PathSpec> children);
PathSpec iterate(PathSpec child, int k);
PathSpec inverse(PathSpec child);
PathSpec concatenate(std::vector<PathSpec> children);
PathSpec loop_multiply(std::vector<int> weights, PathSpec child);
PathSpec loop_multiply(int maslov, PathSpec child);
PathSpec half_period_extend(PathSpec child);
PathSpec product(std::vector<PathSpec> children);
PathSpec conjugate(Mat c, PathSpec child);
}  // namespace spec

int spec_dim(const PathSpec& s);  // 2d
void validate(const PathSpec& s);  // throws Error(Schema)

struct RealizeOptions {
    int resolution = 2048;   // samples per unit time
    double step_bound = 0.25; // |G(t_{j+1}) G(t_j)^{-1} - I| before local refinement
    double unitary_bound = 0.5; // step of the index unitary, see unitary_step
    double drift_tol = 1e-8;  // symplecticity drift per unit time
    OdeOptions ode{};
};

class SymplecticPath {
public:
    SymplecticPath() = default;
    SymplecticPath(std::vector<double> t, std::vector<Mat> m, std::vector<Mat> a = {});

    size_t size() const { return t_.size(); }
    int dim() const { return static_cast<int>(m_.front().rows()); }
    int dim_half() const { return dim() / 2; }
    double duration() const { return t_.back(); }
    const std::vector<double>& times() const { return t_; }
    const std::vector<Mat>& samples() const { return m_; }
    const std::vector<Mat>& generators() const { return a_; }
    bool has_generator() const { return !a_.empty(); }
    const Mat& operator[](size_t i) const { return m_[i]; }
    SymplecticMatrix endpoint() const { return SymplecticMatrix(m_.back(), 1e-6); }

private:
    std::vector<double> t_;
    std::vector<Mat> m_;
    std::vector<Mat> a_;
};

SymplecticPath realize(const PathSpec& s, const RealizeOptions& opt = {});

// Direct evaluation of a spec at arbitrary times (no sampling).
class PathEvaluator {
public:
    explicit PathEvaluator(const PathSpec& s, const RealizeOptions& opt = {});
    ~PathEvaluator();
    PathEvaluator(PathEvaluator&&) noexcept;
    PathEvaluator& operator=(PathEvaluator&&) noexcept;

    Mat operator()(double t);
    Mat generator(double t);
    double duration() const;
    int dim() const;
    std::vector<double> breakpoints();  // segment boundaries of iterate/concatenate nodes

    struct Node;

private:
    std::unique_ptr<Node> root_;
};

SymplecticPath iterate(const SymplecticPath& p, int k);
SymplecticPath inverse(const SymplecticPath& p);
SymplecticPath direct_sum(const std::vector<SymplecticPath>& ps);
SymplecticPath product(const std::vector<SymplecticPath>& ps);
SymplecticPath loop_multiply(const std::vector<int>& weights, const SymplecticPath& p);
SymplecticPath loop_multiply(int maslov, const SymplecticPath& p);
SymplecticPath half_period_extend(const SymplecticPath& p);
SymplecticPath conjugate(const Mat& c, const SymplecticPath& p);

// Linearized flow d/dt G = J A(t) G from G(t0) = y0, adaptive DOPRI5 with a per-step
// symplecticity guard.
Mat integrate_linear(const std::function<Mat(double)>& a, const Mat& y0, double t0, double t1,
                     const OdeOptions& opt = {}, double drift_tol = 1e-8);

// Samples of the linearized flow on the given times (t[0] = 0, y = I there).
SymplecticPath linearized_flow(const std::function<Mat(double)>& a, int dim, const std::vector<double>& t,
                               const OdeOptions& opt = {}, double drift_tol = 1e-8);

}  // namespace sympidx
