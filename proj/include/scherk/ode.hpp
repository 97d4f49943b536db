#pragma once

// Dormand-Prince 5(4) with the 4th-order continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "scherk/errors.hpp"

namespace scherk {

struct Dopri5Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-3;
    double h_max = 0.25;
    double h_min = 1e-14;
    long max_steps = 2'000'000;
};

template <std::size_t N, class F>
class Dopri5 {
public:
    using State = std::array<double, N>;

    Dopri5(F f, double t0, const State& y0, Dopri5Options opt) : f_(std::move(f)), opt_(opt), t_(t0), y_(y0) {
        k1_ = f_(t_, y_);
        h_ = std::min(opt_.h_init, opt_.h_max);
        t_prev_ = t_;
        y_prev_ = y_;
    }

    double t() const noexcept { return t_; }
    const State& y() const noexcept { return y_; }
    double t_prev() const noexcept { return t_prev_; }
    const State& y_prev() const noexcept { return y_prev_; }
    long steps() const noexcept { return steps_; }
    double last_h() const noexcept { return t_ - t_prev_; }

    /// Caps the next step (e.g. so an endpoint is not overshot by much).
    void limit_next_step(double hmax) { h_ = std::min(h_, hmax); }

    /// Takes one accepted step. Throws StepUnderflow if the step collapses.
    void step() {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                                a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                                a65 = -5103.0 / 18656;
        static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                                a76 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                                e6 = 22.0 / 525, e7 = -1.0 / 40;
        static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                                d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                                d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

        bool rejected = false;
        for (;;) {
            if (++steps_ > opt_.max_steps) fail(ErrorKind::StepUnderflow, "step budget exhausted");
            if (!(h_ >= opt_.h_min)) {
                fail(ErrorKind::StepUnderflow, "adaptive step below " + std::to_string(opt_.h_min) +
                                                   " at t = " + std::to_string(t_));
            }
            double h = h_;
            State y2, y3, y4, y5, y6, y7, k2, k3, k4, k5, k6, k7;
            for (std::size_t i = 0; i < N; ++i) y2[i] = y_[i] + h * a21 * k1_[i];
            k2 = f_(t_ + c2 * h, y2);
            for (std::size_t i = 0; i < N; ++i) y3[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2[i]);
            k3 = f_(t_ + c3 * h, y3);
            for (std::size_t i = 0; i < N; ++i) y4[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = f_(t_ + c4 * h, y4);
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = f_(t_ + c5 * h, y5);
            for (std::size_t i = 0; i < N; ++i)
                y6[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = f_(t_ + h, y6);
            for (std::size_t i = 0; i < N; ++i)
                y7[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
            k7 = f_(t_ + h, y7);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                double e = h * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
                double sk = opt_.atol + opt_.rtol * std::max(std::abs(y_[i]), std::abs(y7[i]));
                err += (e / sk) * (e / sk);
            }
            err = std::sqrt(err / N);
            if (!std::isfinite(err)) err = 1e10;

            double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 10.0;
            if (err <= 1.0) {
                fac = std::clamp(fac, 0.2, rejected ? 1.0 : 10.0);
                for (std::size_t i = 0; i < N; ++i) {
                    double dy = y7[i] - y_[i];
                    r1_[i] = y_[i];
                    r2_[i] = dy;
                    r3_[i] = h * k1_[i] - dy;
                    r4_[i] = dy - h * k7[i] - r3_[i];
                    r5_[i] = h * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                }
                t_prev_ = t_;
                y_prev_ = y_;
                t_ += h;
                y_ = y7;
                k1_ = k7;
                h_ = std::min(h * fac, opt_.h_max);
                return;
            }
            rejected = true;
            h_ = h * std::clamp(fac, 0.2, 1.0);
        }
    }

    /// Continuous extension on the last accepted step [t_prev, t].
    State dense(double t) const {
        double h = t_ - t_prev_;
        double th = h != 0.0 ? (t - t_prev_) / h : 0.0;
        double th1 = 1.0 - th;
        State out;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = r1_[i] + th * (r2_[i] + th1 * (r3_[i] + th * (r4_[i] + th1 * r5_[i])));
        return out;
    }

private:
    F f_;
    Dopri5Options opt_;
    double t_, t_prev_;
    State y_, y_prev_, k1_{};
    State r1_{}, r2_{}, r3_{}, r4_{}, r5_{};
    double h_;
    long steps_ = 0;
};

template <std::size_t N, class F>
Dopri5<N, F> make_dopri5(F f, double t0, const std::array<double, N>& y0, Dopri5Options opt) {
    return Dopri5<N, F>(std::move(f), t0, y0, opt);
}

/// Root of a continuous g on [a, b] with g(a), g(b) of opposite sign (or zero).
template <class G>
double locate_root(G g, double a, double b, double ga, double gb) {
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;
    // Illinois-modified regula falsi, then bisection fallback
    for (int it = 0; it < 200; ++it) {
        double m = (ga * b - gb * a) / (ga - gb);
        if (!(m > std::min(a, b) && m < std::max(a, b))) m = 0.5 * (a + b);
        double gm = g(m);
        if (gm == 0.0) return m;
        if ((gm > 0) == (gb > 0)) {
            b = m;
            gb = gm;
            ga *= 0.5;
        } else {
            a = m;
            ga = gm;
            gb *= 0.5;
        }
        if (std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a))) break;
    }
    return std::abs(ga) < std::abs(gb) ? a : b;
}

}  // namespace scherk
