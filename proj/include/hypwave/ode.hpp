#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "hypwave/errors.hpp"

namespace hypwave::ode {

/// Dormand-Prince 5(4) embedded Runge-Kutta with the standard quartic
/// continuous extension (Hairer-Norsett-Wanner DOPRI5). Fixed dimension,
/// callable RHS of signature void(double t, const State&, State&).
template <std::size_t N, typename RHS>
class Dopri5 {
public:
    using State = std::array<double, N>;

    struct Stats {
        std::size_t steps = 0;
        std::size_t rejected = 0;
        std::size_t evals = 0;
    };

    Dopri5(RHS rhs, double tol) : rhs_(std::move(rhs)), atol_(tol), rtol_(tol) {}

    /// Prepare integration from (t0, y0).
    void start(double t0, const State& y0) {
        t_ = t0;
        y_ = y0;
        rhs_(t_, y_, k_[0]);
        ++stats_.evals;
        h_ = initial_step();
        have_step_ = false;
    }

    double t() const { return t_; }
    const State& y() const { return y_; }
    double step_begin() const { return t_prev_; }
    double step_size() const { return h_prev_; }
    const Stats& stats() const { return stats_; }

    /// Advance one accepted step. Returns the new time.
    double step() {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                         b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        const double eps = std::numeric_limits<double>::epsilon();
        for (;;) {
            if (std::abs(h_) < 16.0 * eps * std::max(1.0, std::abs(t_)))
                throw StepSizeUnderflow(t_);
            const double h = h_;
            State y2, y3, y4, y5, y6, y7;
            stage(y2, h, {a21});
            rhs_(t_ + c2 * h, y2, k_[1]);
            stage(y3, h, {a31, a32});
            rhs_(t_ + c3 * h, y3, k_[2]);
            stage(y4, h, {a41, a42, a43});
            rhs_(t_ + c4 * h, y4, k_[3]);
            stage(y5, h, {a51, a52, a53, a54});
            rhs_(t_ + c5 * h, y5, k_[4]);
            stage(y6, h, {a61, a62, a63, a64, a65});
            rhs_(t_ + h, y6, k_[5]);
            for (std::size_t i = 0; i < N; ++i)
                y7[i] = y_[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] +
                                     b5 * k_[4][i] + b6 * k_[5][i]);
            rhs_(t_ + h, y7, k_[6]);
            stats_.evals += 6;

            double errn = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sk = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(y7[i]));
                const double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] +
                                      e5 * k_[4][i] + e6 * k_[5][i] + e7 * k_[6][i]);
                errn += (e / sk) * (e / sk);
            }
            errn = std::sqrt(errn / double(N));
            for (double v : y7)
                if (!std::isfinite(v)) throw NonFiniteState(t_ + h);

            const double factor = errn > 0.0 ? 0.9 * std::pow(errn, -0.2) : 5.0;
            if (errn <= 1.0) {
                prepare_dense(h, y7);
                t_prev_ = t_;
                h_prev_ = h;
                t_ += h;
                y_ = y7;
                k_[0] = k_[6]; // FSAL
                h_ = h * std::min(5.0, std::max(0.2, factor));
                ++stats_.steps;
                have_step_ = true;
                return t_;
            }
            ++stats_.rejected;
            h_ = h * std::min(1.0, std::max(0.2, factor));
        }
    }

    /// Dense-output evaluation inside the last accepted step, theta in [0, 1].
    State dense(double theta) const {
        State out;
        const double th1 = 1.0 - theta;
        for (std::size_t i = 0; i < N; ++i)
            out[i] = rc1_[i] + theta * (rc2_[i] + th1 * (rc3_[i] + theta * (rc4_[i] + th1 * rc5_[i])));
        return out;
    }

    double dense_t(double theta) const { return t_prev_ + theta * h_prev_; }
    bool have_step() const { return have_step_; }

private:
    void stage(State& out, double h, std::initializer_list<double> a) const {
        for (std::size_t i = 0; i < N; ++i) {
            double acc = 0.0;
            std::size_t j = 0;
            for (double aj : a) acc += aj * k_[j++][i];
            out[i] = y_[i] + h * acc;
        }
    }

    void prepare_dense(double h, const State& y1) {
        constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                         d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                         d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double dy = y1[i] - y_[i];
            const double bspl = h * k_[0][i] - dy;
            rc1_[i] = y_[i];
            rc2_[i] = dy;
            rc3_[i] = bspl;
            rc4_[i] = dy - h * k_[6][i] - bspl;
            rc5_[i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] +
                           d6 * k_[5][i] + d7 * k_[6][i]);
        }
    }

    double initial_step() const {
        double dy = 0.0, df = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk = atol_ + rtol_ * std::abs(y_[i]);
            dy += (y_[i] / sk) * (y_[i] / sk);
            df += (k_[0][i] / sk) * (k_[0][i] / sk);
        }
        double h = (dy > 0.0 && df > 0.0) ? 0.01 * std::sqrt(dy / df) : 1e-6;
        return std::min(h, 0.1);
    }

    RHS rhs_;
    double atol_, rtol_;
    double t_ = 0.0, h_ = 0.0;
    double t_prev_ = 0.0, h_prev_ = 0.0;
    State y_{};
    std::array<State, 7> k_{};
    State rc1_{}, rc2_{}, rc3_{}, rc4_{}, rc5_{};
    Stats stats_;
    bool have_step_ = false;
};

} // namespace hypwave::ode
