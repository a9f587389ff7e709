#pragma once

#include "sympidx/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sympidx {

struct OdeOptions {
    double rtol = 1e-12;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    long max_steps = 10'000'000;
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
};

// Dormand-Prince 5(4) with error control. `check` runs on every trial step and may
// reject it (return false), which halves the step.
template <class State>
State dopri5(const std::function<State(double, const State&)>& f, State y, double t0, double t1,
             const OdeOptions& opt, OdeStats* stats = nullptr,
             const std::function<bool(double, const State&)>& check = {}) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) return y;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(opt.h_init, std::abs(t1 - t0));
    State k1 = f(t, y);
    long steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > opt.max_steps) throw Error(ErrorKind::DriftExceeded, "ODE step budget exhausted");
        if (dir * (t + h - t1) > 0) h = t1 - t;
        const State k2 = f(t + c2 * h, y + h * (a21 * k1));
        const State k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const State k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const State k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const State k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const State yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = f(t + h, yn);
        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = opt.atol + opt.rtol * std::max(y.cwiseAbs().maxCoeff(), yn.cwiseAbs().maxCoeff());
        const double en = err.cwiseAbs().maxCoeff() / scale;
        bool ok = std::isfinite(en) && en <= 1.0;
        if (ok && check && !check(t + h, yn)) {
            if (stats) ++stats->rejected;
            h *= 0.5;
            if (std::abs(h) < opt.h_min)
                throw Error(ErrorKind::DriftExceeded, "step halving below h_min at t=" + std::to_string(t));
            continue;
        }
        if (ok) {
            t += h;
            y = yn;
            k1 = k7;
            if (stats) ++stats->accepted;
        } else if (stats) {
            ++stats->rejected;
        }
        const double fac = (en > 0 && std::isfinite(en)) ? 0.9 * std::pow(en, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (std::abs(h) < opt.h_min && dir * (t1 - t) > opt.h_min)
            throw Error(ErrorKind::DriftExceeded, "step size underflow at t=" + std::to_string(t));
    }
    return y;
}

}  // namespace sympidx
