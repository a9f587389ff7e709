#include "sympidx/path.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace sympidx {

namespace spec {

PathSpec rotation(double weight, double duration) { return {duration, RotationBody{weight}}; }

PathSpec shear(double slope, double duration) { return {duration, ShearBody{slope}}; }

PathSpec generator(std::vector<Mat> coeffs, double duration) {
    return {duration, GeneratorBody{std::move(coeffs)}};
}

PathSpec exponential(const Mat& s, double duration) { return generator({s}, duration); }

PathSpec identity(int dim_half, double duration) {
    return generator({Mat::Zero(2 * dim_half, 2 * dim_half)}, duration);
}

PathSpec direct_sum(std::vector<PathSpec> children) {
    const double t = children.empty() ? 0.0 : children.front().duration;
    return {t, DirectSumBody{std::move(children)}};
}

PathSpec iterate(PathSpec child, int k) {
    const double t = child.duration * k;
    return {t, IterateBody{{std::move(child)}, k}};
}

PathSpec inverse(PathSpec child) {
    const double t = child.duration;
    return {t, InverseBody{{std::move(child)}}};
}

PathSpec concatenate(std::vector<PathSpec> children) {
    double t = 0;
    for (const auto& c : children) t += c.duration;
    return {t, ConcatenateBody{std::move(children)}};
}

PathSpec loop_multiply(std::vector<int> weights, PathSpec child) {
    const double t = child.duration;
    return {t, LoopMultiplyBody{std::move(weights), {std::move(child)}}};
}

PathSpec loop_multiply(int maslov, PathSpec child) {
    std::vector<int> w(spec_dim(child) / 2, 0);
    w[0] = maslov;
    return loop_multiply(std::move(w), std::move(child));
}

PathSpec half_period_extend(PathSpec child) {
    const double t = 2 * child.duration;
    return {t, HalfPeriodExtendBody{{std::move(child)}}};
}

PathSpec product(std::vector<PathSpec> children) {
    const double t = children.empty() ? 0.0 : children.front().duration;
    return {t, ProductBody{std::move(children)}};
}

PathSpec conjugate(Mat c, PathSpec child) {
    const double t = child.duration;
    return {t, ConjugateBody{std::move(c), {std::move(child)}}};
}

}  // namespace spec

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void schema(const std::string& msg) { throw Error(ErrorKind::Schema, msg); }

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

}  // namespace

int spec_dim(const PathSpec& s) {
    return std::visit(
        overloaded{
            [](const RotationBody&) { return 2; },
            [](const ShearBody&) { return 2; },
            [](const GeneratorBody& g) {
                return g.coeffs.empty() ? 0 : static_cast<int>(g.coeffs.front().rows());
            },
            [](const DirectSumBody& b) {
                int d = 0;
                for (const auto& c : b.children) d += spec_dim(c);
                return d;
            },
            [](const IterateBody& b) { return b.child.empty() ? 0 : spec_dim(b.child[0]); },
            [](const InverseBody& b) { return b.child.empty() ? 0 : spec_dim(b.child[0]); },
            [](const ConcatenateBody& b) { return b.children.empty() ? 0 : spec_dim(b.children[0]); },
            [](const LoopMultiplyBody& b) { return b.child.empty() ? 0 : spec_dim(b.child[0]); },
            [](const HalfPeriodExtendBody& b) { return b.child.empty() ? 0 : spec_dim(b.child[0]); },
            [](const ProductBody& b) { return b.children.empty() ? 0 : spec_dim(b.children[0]); },
            [](const ConjugateBody& b) { return b.child.empty() ? 0 : spec_dim(b.child[0]); },
        },
        s.body);
}

void validate(const PathSpec& s) {
    if (!(s.duration > 0) || !std::isfinite(s.duration)) schema("duration must be positive");
    auto one_child = [](const std::vector<PathSpec>& c) {
        if (c.size() != 1) schema("node needs exactly one child");
        validate(c[0]);
    };
    std::visit(
        overloaded{
            [](const RotationBody& b) {
                if (!std::isfinite(b.weight)) schema("rotation weight must be finite");
            },
            [](const ShearBody& b) {
                if (!std::isfinite(b.slope)) schema("shear slope must be finite");
            },
            [](const GeneratorBody& g) {
                if (g.coeffs.empty()) schema("generator needs at least one coefficient");
                const auto n = g.coeffs.front().rows();
                if (n == 0 || n % 2 != 0) schema("generator dimension must be positive and even");
                for (const auto& c : g.coeffs) {
                    if (c.rows() != n || c.cols() != n) schema("generator coefficients differ in size");
                    if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, c.norm()))
                        schema("generator coefficients must be symmetric");
                }
            },
            [&](const DirectSumBody& b) {
                if (b.children.empty()) schema("direct_sum needs children");
                for (const auto& c : b.children) {
                    validate(c);
                    if (!close(c.duration, s.duration)) schema("direct_sum children must share duration");
                }
            },
            [&](const IterateBody& b) {
                if (b.k < 1) schema("iterate k must be >= 1");
                one_child(b.child);
                if (!close(b.child[0].duration * b.k, s.duration)) schema("iterate duration mismatch");
            },
            [&](const InverseBody& b) {
                one_child(b.child);
                if (!close(b.child[0].duration, s.duration)) schema("inverse duration mismatch");
            },
            [&](const ConcatenateBody& b) {
                if (b.children.empty()) schema("concatenate needs children");
                double t = 0;
                const int d = spec_dim(b.children[0]);
                for (const auto& c : b.children) {
                    validate(c);
                    if (spec_dim(c) != d) schema("concatenate children differ in dimension");
                    t += c.duration;
                }
                if (!close(t, s.duration)) schema("concatenate duration mismatch");
            },
            [&](const LoopMultiplyBody& b) {
                one_child(b.child);
                if (static_cast<int>(b.weights.size()) * 2 != spec_dim(b.child[0]))
                    schema("loop weights must have one entry per 2-block");
                if (!close(b.child[0].duration, s.duration)) schema("loop_multiply duration mismatch");
            },
            [&](const HalfPeriodExtendBody& b) {
                one_child(b.child);
                if (!close(2 * b.child[0].duration, s.duration)) schema("half_period_extend duration mismatch");
            },
            [&](const ProductBody& b) {
                if (b.children.empty()) schema("product needs children");
                const int d = spec_dim(b.children[0]);
                for (const auto& c : b.children) {
                    validate(c);
                    if (spec_dim(c) != d) schema("product children differ in dimension");
                    if (!close(c.duration, s.duration)) schema("product children must share duration");
                }
            },
            [&](const ConjugateBody& b) {
                one_child(b.child);
                if (b.c.rows() != spec_dim(b.child[0]) || b.c.cols() != b.c.rows())
                    schema("conjugating matrix has wrong size");
                if (symplectic_defect(b.c) > 1e-9 * std::max(1.0, b.c.squaredNorm()))
                    schema("conjugating matrix is not symplectic");
                if (!close(b.child[0].duration, s.duration)) schema("conjugate duration mismatch");
            },
        },
        s.body);
}

// ---------------------------------------------------------------------------
// evaluator nodes

struct PathEvaluator::Node {
    virtual ~Node() = default;
    virtual Mat eval(double t) = 0;
    virtual Mat gen(double t) = 0;
    virtual void breakpoints(double offset, std::vector<double>& out) { (void)offset; (void)out; }
    double T = 0;
    int n = 0;  // 2d
};

namespace {

using Node = PathEvaluator::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr compile(const PathSpec& s, const RealizeOptions& opt);

struct RotationNode : Node {
    double w;
    Mat eval(double t) override { return rotation2(kTwoPi * w * t); }
    Mat gen(double) override { return kTwoPi * w * Mat::Identity(2, 2); }
};

struct ShearNode : Node {
    double s;
    Mat eval(double t) override {
        Mat m = Mat::Identity(2, 2);
        m(0, 1) = s * t;
        return m;
    }
    Mat gen(double) override {
        Mat a = Mat::Zero(2, 2);
        a(1, 1) = -s;
        return a;
    }
};

struct ConstGeneratorNode : Node {
    Mat js;
    Mat a;
    Mat eval(double t) override { return matrix_exp(t * js); }
    Mat gen(double) override { return a; }
};

struct OdeGeneratorNode : Node {
    std::vector<Mat> coeffs;
    Mat j;
    RealizeOptions opt;
    std::map<double, Mat> cache;

    Mat gen(double t) override {
        Mat a = Mat::Zero(n, n);
        double p = 1.0;
        for (const auto& c : coeffs) {
            a += p * c;
            p *= t;
        }
        return a;
    }
    Mat eval(double t) override {
        if (cache.empty()) cache.emplace(0.0, Mat::Identity(n, n));
        auto it = cache.upper_bound(t);
        --it;
        if (it->first == t) return it->second;
        Mat y = integrate_linear([this](double s) { return gen(s); }, it->second, it->first, t, opt.ode,
                                 opt.drift_tol);
        cache.emplace(t, y);
        return y;
    }
};

struct DirectSumNode : Node {
    std::vector<NodePtr> children;
    Mat eval(double t) override {
        std::vector<Mat> b;
        for (auto& c : children) b.push_back(c->eval(t));
        return block_diag(b);
    }
    Mat gen(double t) override {
        std::vector<Mat> b;
        for (auto& c : children) b.push_back(c->gen(t));
        return block_diag(b);
    }
    void breakpoints(double offset, std::vector<double>& out) override {
        for (auto& c : children) c->breakpoints(offset, out);
    }
};

struct IterateNode : Node {
    NodePtr child;
    int k = 1;
    std::vector<Mat> powers;  // P^j

    std::pair<int, double> split(double t) {
        const double tc = child->T;
        int j = static_cast<int>(std::floor(t / tc));
        j = std::clamp(j, 0, k - 1);
        double s = std::clamp(t - j * tc, 0.0, tc);
        return {j, s};
    }
    const Mat& power(int j) {
        if (powers.empty()) powers.push_back(Mat::Identity(n, n));
        if (powers.size() == 1 && j >= 1) powers.push_back(child->eval(child->T));
        while (static_cast<int>(powers.size()) <= j) powers.push_back(powers.back() * powers[1]);
        return powers[j];
    }
    Mat eval(double t) override {
        auto [j, s] = split(t);
        return child->eval(s) * power(j);
    }
    Mat gen(double t) override { return child->gen(split(t).second); }
    void breakpoints(double offset, std::vector<double>& out) override {
        for (int j = 0; j < k; ++j) {
            out.push_back(offset + j * child->T);
            child->breakpoints(offset + j * child->T, out);
        }
    }
};

struct InverseNode : Node {
    NodePtr child;
    Mat eval(double t) override { return symplectic_inverse(child->eval(t)); }
    Mat gen(double t) override {
        const Mat g = child->eval(t);
        return -g.transpose() * child->gen(t) * g;
    }
    void breakpoints(double offset, std::vector<double>& out) override { child->breakpoints(offset, out); }
};

struct ConcatenateNode : Node {
    std::vector<NodePtr> children;
    std::vector<double> start;
    std::vector<Mat> prefix;  // product of earlier endpoints

    size_t piece(double t) const {
        size_t i = 0;
        while (i + 1 < children.size() && t >= start[i + 1]) ++i;
        return i;
    }
    void ensure_prefix() {
        if (!prefix.empty()) return;
        prefix.push_back(Mat::Identity(n, n));
        for (size_t i = 0; i + 1 < children.size(); ++i)
            prefix.push_back(children[i]->eval(children[i]->T) * prefix.back());
    }
    Mat eval(double t) override {
        ensure_prefix();
        const size_t i = piece(t);
        const double s = std::clamp(t - start[i], 0.0, children[i]->T);
        return children[i]->eval(s) * prefix[i];
    }
    Mat gen(double t) override {
        const size_t i = piece(t);
        return children[i]->gen(std::clamp(t - start[i], 0.0, children[i]->T));
    }
    void breakpoints(double offset, std::vector<double>& out) override {
        for (size_t i = 0; i < children.size(); ++i) {
            out.push_back(offset + start[i]);
            children[i]->breakpoints(offset + start[i], out);
        }
    }
};

Mat loop_matrix(const std::vector<int>& w, double t, double T) {
    std::vector<Mat> b;
    for (int wi : w) b.push_back(rotation2(kTwoPi * wi * t / T));
    return block_diag(b);
}

Mat loop_generator(const std::vector<int>& w, double T) {
    std::vector<Mat> b;
    for (int wi : w) b.push_back(kTwoPi * wi / T * Mat::Identity(2, 2));
    return block_diag(b);
}

// generator of the pointwise product L(t) G(t)
Mat product_generator(const Mat& l, const Mat& al, const Mat& ag) {
    const Mat linv = symplectic_inverse(l);
    return al + linv.transpose() * ag * linv;
}

struct LoopNode : Node {
    std::vector<int> w;
    NodePtr child;
    Mat eval(double t) override { return loop_matrix(w, t, T) * child->eval(t); }
    Mat gen(double t) override {
        return product_generator(loop_matrix(w, t, T), loop_generator(w, T), child->gen(t));
    }
    void breakpoints(double offset, std::vector<double>& out) override { child->breakpoints(offset, out); }
};

struct ProductNode : Node {
    std::vector<NodePtr> children;
    Mat eval(double t) override {
        Mat m = children[0]->eval(t);
        for (size_t i = 1; i < children.size(); ++i) m = m * children[i]->eval(t);
        return m;
    }
    Mat gen(double t) override {
        // A(G1 * R) = A1 + G1^{-T} A_R G1^{-1}, folded from the right
        Mat a = children.back()->gen(t);
        for (size_t i = children.size() - 1; i-- > 0;)
            a = product_generator(children[i]->eval(t), children[i]->gen(t), a);
        return a;
    }
    void breakpoints(double offset, std::vector<double>& out) override {
        for (auto& c : children) c->breakpoints(offset, out);
    }
};

struct ConjugateNode : Node {
    Mat c, cinv;
    NodePtr child;
    Mat eval(double t) override { return c * child->eval(t) * cinv; }
    Mat gen(double t) override { return cinv.transpose() * child->gen(t) * cinv; }
    void breakpoints(double offset, std::vector<double>& out) override { child->breakpoints(offset, out); }
};

NodePtr compile(const PathSpec& s, const RealizeOptions& opt) {
    NodePtr out = std::visit(
        overloaded{
            [&](const RotationBody& b) -> NodePtr {
                auto p = std::make_unique<RotationNode>();
                p->w = b.weight;
                return p;
            },
            [&](const ShearBody& b) -> NodePtr {
                auto p = std::make_unique<ShearNode>();
                p->s = b.slope;
                return p;
            },
            [&](const GeneratorBody& b) -> NodePtr {
                const int n = static_cast<int>(b.coeffs.front().rows());
                bool constant = true;
                for (size_t k = 1; k < b.coeffs.size(); ++k)
                    if (b.coeffs[k].cwiseAbs().maxCoeff() != 0.0) constant = false;
                if (constant) {
                    auto p = std::make_unique<ConstGeneratorNode>();
                    p->a = b.coeffs.front();
                    p->js = standard_j(n / 2) * p->a;
                    return p;
                }
                auto p = std::make_unique<OdeGeneratorNode>();
                p->coeffs = b.coeffs;
                p->j = standard_j(n / 2);
                p->opt = opt;
                return p;
            },
            [&](const DirectSumBody& b) -> NodePtr {
                auto p = std::make_unique<DirectSumNode>();
                for (const auto& c : b.children) p->children.push_back(compile(c, opt));
                return p;
            },
            [&](const IterateBody& b) -> NodePtr {
                auto p = std::make_unique<IterateNode>();
                p->child = compile(b.child[0], opt);
                p->k = b.k;
                return p;
            },
            [&](const InverseBody& b) -> NodePtr {
                auto p = std::make_unique<InverseNode>();
                p->child = compile(b.child[0], opt);
                return p;
            },
            [&](const ConcatenateBody& b) -> NodePtr {
                auto p = std::make_unique<ConcatenateNode>();
                double t = 0;
                for (const auto& c : b.children) {
                    p->start.push_back(t);
                    p->children.push_back(compile(c, opt));
                    t += c.duration;
                }
                return p;
            },
            [&](const LoopMultiplyBody& b) -> NodePtr {
                auto p = std::make_unique<LoopNode>();
                p->w = b.weights;
                p->child = compile(b.child[0], opt);
                return p;
            },
            [&](const HalfPeriodExtendBody& b) -> NodePtr {
                auto p = std::make_unique<IterateNode>();
                p->child = compile(b.child[0], opt);
                p->k = 2;
                return p;
            },
            [&](const ProductBody& b) -> NodePtr {
                auto p = std::make_unique<ProductNode>();
                for (const auto& c : b.children) p->children.push_back(compile(c, opt));
                return p;
            },
            [&](const ConjugateBody& b) -> NodePtr {
                auto p = std::make_unique<ConjugateNode>();
                p->c = b.c;
                p->cinv = symplectic_inverse(b.c);
                p->child = compile(b.child[0], opt);
                return p;
            },
        },
        s.body);
    out->T = s.duration;
    out->n = spec_dim(s);
    return out;
}

}  // namespace

PathEvaluator::PathEvaluator(const PathSpec& s, const RealizeOptions& opt) {
    validate(s);
    root_ = compile(s, opt);
}
PathEvaluator::~PathEvaluator() = default;
PathEvaluator::PathEvaluator(PathEvaluator&&) noexcept = default;
PathEvaluator& PathEvaluator::operator=(PathEvaluator&&) noexcept = default;

Mat PathEvaluator::operator()(double t) { return root_->eval(t); }
Mat PathEvaluator::generator(double t) { return root_->gen(t); }
double PathEvaluator::duration() const { return root_->T; }
int PathEvaluator::dim() const { return root_->n; }
std::vector<double> PathEvaluator::breakpoints() {
    std::vector<double> out;
    root_->breakpoints(0.0, out);
    return out;
}

// ---------------------------------------------------------------------------

SymplecticPath::SymplecticPath(std::vector<double> t, std::vector<Mat> m, std::vector<Mat> a)
    : t_(std::move(t)), m_(std::move(m)), a_(std::move(a)) {
    if (t_.empty() || t_.size() != m_.size()) throw Error(ErrorKind::Schema, "path needs matching samples");
    if (!a_.empty() && a_.size() != m_.size()) throw Error(ErrorKind::Schema, "generator sample count mismatch");
    if (t_.front() != 0.0) throw Error(ErrorKind::Schema, "path must start at t = 0");
    if ((m_.front() - Mat::Identity(m_.front().rows(), m_.front().cols())).cwiseAbs().maxCoeff() > 1e-12)
        throw Error(ErrorKind::Schema, "path must start at the identity");
    for (size_t i = 1; i < t_.size(); ++i)
        if (!(t_[i] > t_[i - 1])) throw Error(ErrorKind::Schema, "sample times must increase");
}

namespace {

double step_size(const Mat& a, const Mat& b) {
    return (b * symplectic_inverse(a) - Mat::Identity(a.rows(), a.cols())).norm();
}

void check_drift(const Mat& m, double t, double tol) {
    const double scale = std::max(1.0, m.squaredNorm());
    if (symplectic_defect(m) > tol * (1.0 + t) * scale)
        throw Error(ErrorKind::DriftExceeded, "symplecticity drift at t=" + std::to_string(t));
}

}  // namespace

SymplecticPath realize(const PathSpec& s, const RealizeOptions& opt) {
    PathEvaluator ev(s, opt);
    const double T = s.duration;
    const int n = std::max(1, static_cast<int>(std::ceil(T * opt.resolution - 1e-9)));
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (int j = 0; j <= n; ++j) grid.push_back(T * j / n);
    const std::vector<double> bp = ev.breakpoints();
    grid.insert(grid.end(), bp.begin(), bp.end());
    std::sort(grid.begin(), grid.end());
    std::vector<double> t;
    for (double x : grid) {
        if (x < 0 || x > T) continue;
        if (!t.empty() && x - t.back() <= 1e-12 * std::max(1.0, T)) continue;
        t.push_back(x);
    }
    if (t.back() < T) t.back() = T;

    std::vector<double> ot{0.0};
    std::vector<Mat> om{Mat::Identity(ev.dim(), ev.dim())};
    std::vector<Mat> oa{ev.generator(0.0)};
    UnitaryBlocks ou = unitary_blocks(om.back());
    for (size_t i = 1; i < t.size(); ++i) {
        // local refinement where the continuity guard fails
        std::vector<double> pending{t[i]};
        while (!pending.empty()) {
            const double tn = pending.back();
            Mat m = ev(tn);
            UnitaryBlocks u = unitary_blocks(m);
            const double h = tn - ot.back();
            const bool coarse = step_size(om.back(), m) > opt.step_bound || unitary_step(ou, u) > opt.unitary_bound;
            if (coarse && h > 1e-9 * std::max(1.0, T)) {
                pending.push_back(ot.back() + 0.5 * h);
                continue;
            }
            check_drift(m, tn, opt.drift_tol);
            ot.push_back(tn);
            om.push_back(std::move(m));
            ou = std::move(u);
            oa.push_back(ev.generator(tn));
            pending.pop_back();
        }
    }
    return SymplecticPath(std::move(ot), std::move(om), std::move(oa));
}

SymplecticPath iterate(const SymplecticPath& p, int k) {
    if (k < 1) throw Error(ErrorKind::InvalidParams, "iterate k must be >= 1");
    const double T = p.duration();
    const Mat end = p.samples().back();
    std::vector<double> t;
    std::vector<Mat> m, a;
    Mat pw = Mat::Identity(p.dim(), p.dim());
    for (int j = 0; j < k; ++j) {
        for (size_t i = (j == 0 ? 0 : 1); i < p.size(); ++i) {
            t.push_back(j * T + p.times()[i]);
            m.push_back(p[i] * pw);
            if (p.has_generator()) a.push_back(p.generators()[i]);
        }
        pw = end * pw;
    }
    return SymplecticPath(std::move(t), std::move(m), std::move(a));
}

SymplecticPath inverse(const SymplecticPath& p) {
    std::vector<Mat> m, a;
    for (size_t i = 0; i < p.size(); ++i) {
        m.push_back(symplectic_inverse(p[i]));
        if (p.has_generator()) a.push_back(-p[i].transpose() * p.generators()[i] * p[i]);
    }
    return SymplecticPath(p.times(), std::move(m), std::move(a));
}

namespace {

void require_same_grid(const std::vector<SymplecticPath>& ps) {
    if (ps.empty()) throw Error(ErrorKind::InvalidParams, "need at least one path");
    for (const auto& q : ps) {
        if (q.size() != ps[0].size()) throw Error(ErrorKind::Schema, "paths are sampled on different grids");
        for (size_t i = 0; i < q.size(); ++i)
            if (std::abs(q.times()[i] - ps[0].times()[i]) > 1e-12)
                throw Error(ErrorKind::Schema, "paths are sampled on different grids");
    }
}

}  // namespace

SymplecticPath direct_sum(const std::vector<SymplecticPath>& ps) {
    require_same_grid(ps);
    bool gen = true;
    for (const auto& q : ps) gen = gen && q.has_generator();
    std::vector<Mat> m, a;
    for (size_t i = 0; i < ps[0].size(); ++i) {
        std::vector<Mat> b, g;
        for (const auto& q : ps) {
            b.push_back(q[i]);
            if (gen) g.push_back(q.generators()[i]);
        }
        m.push_back(block_diag(b));
        if (gen) a.push_back(block_diag(g));
    }
    return SymplecticPath(ps[0].times(), std::move(m), std::move(a));
}

SymplecticPath product(const std::vector<SymplecticPath>& ps) {
    require_same_grid(ps);
    bool gen = true;
    for (const auto& q : ps) gen = gen && q.has_generator();
    std::vector<Mat> m, a;
    for (size_t i = 0; i < ps[0].size(); ++i) {
        Mat x = ps.back()[i];
        Mat g = gen ? ps.back().generators()[i] : Mat();
        for (size_t k = ps.size() - 1; k-- > 0;) {
            if (gen) g = product_generator(ps[k][i], ps[k].generators()[i], g);
            x = ps[k][i] * x;
        }
        m.push_back(std::move(x));
        if (gen) a.push_back(std::move(g));
    }
    return SymplecticPath(ps[0].times(), std::move(m), std::move(a));
}

SymplecticPath loop_multiply(const std::vector<int>& weights, const SymplecticPath& p) {
    if (static_cast<int>(weights.size()) != p.dim_half())
        throw Error(ErrorKind::InvalidParams, "loop weights must have one entry per 2-block");
    const double T = p.duration();
    const Mat al = loop_generator(weights, T);
    std::vector<Mat> m, a;
    for (size_t i = 0; i < p.size(); ++i) {
        const Mat l = loop_matrix(weights, p.times()[i], T);
        m.push_back(l * p[i]);
        if (p.has_generator()) a.push_back(product_generator(l, al, p.generators()[i]));
    }
    return SymplecticPath(p.times(), std::move(m), std::move(a));
}

SymplecticPath loop_multiply(int maslov, const SymplecticPath& p) {
    std::vector<int> w(p.dim_half(), 0);
    w[0] = maslov;
    return loop_multiply(w, p);
}

SymplecticPath half_period_extend(const SymplecticPath& p) { return iterate(p, 2); }

SymplecticPath conjugate(const Mat& c, const SymplecticPath& p) {
    const Mat ci = symplectic_inverse(c);
    std::vector<Mat> m, a;
    for (size_t i = 0; i < p.size(); ++i) {
        m.push_back(c * p[i] * ci);
        if (p.has_generator()) a.push_back(ci.transpose() * p.generators()[i] * ci);
    }
    return SymplecticPath(p.times(), std::move(m), std::move(a));
}

Mat integrate_linear(const std::function<Mat(double)>& a, const Mat& y0, double t0, double t1,
                     const OdeOptions& opt, double drift_tol) {
    const int n = static_cast<int>(y0.rows());
    const Mat j = standard_j(n / 2);
    std::function<Mat(double, const Mat&)> f = [&](double t, const Mat& y) -> Mat { return j * a(t) * y; };
    const double d0 = symplectic_defect(y0) / std::max(1.0, y0.squaredNorm());
    std::function<bool(double, const Mat&)> check = [&](double t, const Mat& y) {
        const double d = symplectic_defect(y) / std::max(1.0, y.squaredNorm());
        return d <= d0 + drift_tol * (1.0 + std::abs(t - t0));
    };
    return dopri5<Mat>(f, y0, t0, t1, opt, nullptr, check);
}

SymplecticPath linearized_flow(const std::function<Mat(double)>& a, int dim, const std::vector<double>& t,
                               const OdeOptions& opt, double drift_tol) {
    std::vector<Mat> m{Mat::Identity(dim, dim)};
    std::vector<Mat> g{a(t.front())};
    for (size_t i = 1; i < t.size(); ++i) {
        m.push_back(integrate_linear(a, m.back(), t[i - 1], t[i], opt, drift_tol));
        check_drift(m.back(), t[i], drift_tol);
        g.push_back(a(t[i]));
    }
    return SymplecticPath(t, std::move(m), std::move(g));
}

}  // namespace sympidx
