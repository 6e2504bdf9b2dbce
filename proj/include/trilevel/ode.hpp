#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "trilevel/error.hpp"

namespace trilevel::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;  // 0: derived from the span
    std::size_t max_steps = 50'000'000;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

namespace detail {

template <std::size_t N>
inline State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (const auto& [c, k] : terms) {
        if (c == 0.0) continue;
        const double hc = h * c;
        for (std::size_t i = 0; i < N; ++i) out[i] += hc * (*k)[i];
    }
    return out;
}

}  // namespace detail

// Dormand-Prince 5(4) with FSAL. Lands exactly on every entry of `outputs` (ascending,
// within [t0, t1]) and calls observe(t, y) there. `cap[i]` bounds the magnitude used in the
// relative part of the error scale, so unbounded components (accumulated phases) are
// controlled absolutely.
template <std::size_t N, typename Rhs, typename Observer>
Stats dopri5(Rhs&& f, double t0, State<N> y, const std::vector<double>& outputs, const Options& opt,
             Observer&& observe, const State<N>* cap = nullptr) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    Stats st;
    if (outputs.empty()) return st;
    const double t_end = outputs.back();
    const double span = t_end - t0;

    double t = t0;
    State<N> k1 = f(t, y);
    ++st.rhs_calls;
    double h = opt.initial_step > 0.0 ? opt.initial_step : std::max(span, 1e-300) * 1e-4;
    h = std::min(h, opt.max_step);

    std::size_t next = 0;
    while (next < outputs.size() && outputs[next] <= t) observe(outputs[next++], y);

    while (next < outputs.size()) {
        if (st.accepted + st.rejected >= opt.max_steps) throw NumericalError("dopri5: step budget exhausted", t);
        const double target = outputs[next];
        bool lands = false;
        double hs = std::min(h, opt.max_step);
        if (t + hs >= target - 1e-12 * std::max(1.0, std::abs(target))) {
            hs = target - t;
            lands = true;
        }
        if (!(hs > 1e-14 * std::max(1.0, std::abs(t)))) throw NumericalError("dopri5: step size underflow", t);

        const State<N> k2 = f(t + c2 * hs, detail::axpy<N>(y, hs, {{a21, &k1}}));
        const State<N> k3 = f(t + c3 * hs, detail::axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = f(t + c4 * hs, detail::axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 =
            f(t + c5 * hs, detail::axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 =
            f(t + hs, detail::axpy<N>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y5 = detail::axpy<N>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State<N> k7 = f(t + hs, y5);
        st.rhs_calls += 6;

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei =
                hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double mag = std::max(std::abs(y[i]), std::abs(y5[i]));
            if (cap) mag = std::min(mag, (*cap)[i]);
            const double sc = opt.abs_tol + opt.rel_tol * mag;
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / N);
        if (!std::isfinite(err)) throw NumericalError("dopri5: non-finite state", t);

        const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        if (err <= 1.0) {
            t = lands ? target : t + hs;
            y = y5;
            k1 = k7;
            ++st.accepted;
            // A step shortened to land on an output says nothing about the natural step size.
            if (!lands || hs >= h) h = hs * std::clamp(fac, 0.2, 5.0);
            while (next < outputs.size() && outputs[next] <= t) observe(outputs[next++], y);
        } else {
            ++st.rejected;
            h = hs * std::clamp(fac, 0.1, 1.0);
        }
    }
    return st;
}

// Classic RK4 on the uniform grid t0 + k (t1 - t0) / n. Outputs off the grid are reached by a
// partial step from the preceding grid point that does not disturb the main sequence.
template <std::size_t N, typename Rhs, typename Observer>
Stats rk4(Rhs&& f, double t0, State<N> y, double t1, std::size_t n, const std::vector<double>& outputs,
          Observer&& observe) {
    if (n == 0) throw PreconditionError("rk4: n_steps must be positive");
    Stats st;
    auto step = [&](double t, const State<N>& x, double h) {
        const State<N> k1 = f(t, x);
        const State<N> k2 = f(t + 0.5 * h, detail::axpy<N>(x, h, {{0.5, &k1}}));
        const State<N> k3 = f(t + 0.5 * h, detail::axpy<N>(x, h, {{0.5, &k2}}));
        const State<N> k4 = f(t + h, detail::axpy<N>(x, h, {{1.0, &k3}}));
        st.rhs_calls += 4;
        return detail::axpy<N>(x, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
    };
    const double h = (t1 - t0) / static_cast<double>(n);
    std::size_t next = 0;
    double t = t0;
    for (std::size_t k = 0;; ++k) {
        t = t0 + static_cast<double>(k) * h;
        const double t_next = k < n ? t0 + static_cast<double>(k + 1) * h : t;
        while (next < outputs.size() && outputs[next] < t_next - 1e-12 * std::max(1.0, std::abs(t_next))) {
            const double dt = outputs[next] - t;
            observe(outputs[next], std::abs(dt) <= 1e-12 * std::max(1.0, std::abs(t)) ? y : step(t, y, dt));
            ++next;
        }
        if (k == n) break;
        y = step(t, y, h);
        ++st.accepted;
    }
    while (next < outputs.size()) observe(outputs[next++], y);
    return st;
}

}  // namespace trilevel::ode
