#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hypwave/errors.hpp"
#include "hypwave/fourier.hpp"
#include "hypwave/hopf.hpp"
#include "hypwave/model.hpp"
#include "hypwave/ode.hpp"

namespace hypwave {

struct TrajectorySample {
    double xi;
    PhaseState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

/// One period of the wave profile, sampled uniformly in xi over [0, T).
/// samples[0] lies on the Poincare section {V = f(0), U > 0}.
struct PeriodicOrbit {
    double epsilon = 0.0;
    double speed = 0.0;
    double tau = 0.0;
    double period = 0.0;
    std::vector<PhaseState> samples;
    double amplitude_u = 0.0; // max |U|
    double amplitude_v = 0.0; // max |V - f(0)|
    double closure_residual = 0.0;
    fourier::TrigInterp u_interp, v_interp; // over [0, period)
};

struct OrbitOptions {
    double tol = 1e-12;
    std::optional<BifSide> force_side;    // override the a0-selected bifurcation side
    std::optional<double> initial_radius; // override the normal-form seed radius
    int max_newton = 30;
};

/// Adaptive integration of the traveling-wave system; samples at accepted steps.
inline Trajectory integrate(const ValidatedModel& model, double c, PhaseState start, double span,
                            double tol) {
    if (!(tol >= 1e-14 && tol <= 1e-3)) throw EvaluationError("integrate: tol outside [1e-14, 1e-3]");
    detail::subchar_factor(c, model.tau()); // throws CharacteristicSpeed when violated
    auto f = [&](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const PhaseState r = rhs({y[0], y[1]}, c, model);
        dy[0] = r.U;
        dy[1] = r.V;
    };
    ode::Dopri5<2, decltype(f)> solver(f, tol);
    solver.start(0.0, {start.U, start.V});
    Trajectory traj;
    traj.samples.push_back({0.0, start});
    while (solver.t() < span) {
        double t = solver.step();
        if (t > span) {
            const double theta = (span - solver.step_begin()) / solver.step_size();
            auto y = solver.dense(theta);
            traj.samples.push_back({span, {y[0], y[1]}});
            break;
        }
        traj.samples.push_back({t, {solver.y()[0], solver.y()[1]}});
    }
    traj.steps = solver.stats().steps;
    traj.rejected = solver.stats().rejected;
    return traj;
}

namespace detail {

struct ReturnData {
    double time;
    std::array<double, 6> state; // (U, V, Phi11, Phi12, Phi21, Phi22)
};

// First return to the section {V = Vs} with positive crossing (V increasing),
// integrating the state together with the first-variation matrix.
// Returns nullopt when the trajectory never comes back (escape / collapse).
inline std::optional<ReturnData> poincare_return(const ValidatedModel& model, double c, double u0,
                                                 double Vs, double t_max, double escape_radius,
                                                 double tol) {
    auto f = [&](double, const std::array<double, 6>& y, std::array<double, 6>& dy) {
        const PhaseState r = rhs({y[0], y[1]}, c, model);
        const Mat2 J = jacobian({y[0], y[1]}, c, model);
        dy[0] = r.U;
        dy[1] = r.V;
        dy[2] = J.a11 * y[2] + J.a12 * y[4];
        dy[3] = J.a11 * y[3] + J.a12 * y[5];
        dy[4] = J.a21 * y[2] + J.a22 * y[4];
        dy[5] = J.a21 * y[3] + J.a22 * y[5];
    };
    ode::Dopri5<6, decltype(f)> solver(f, tol);
    solver.start(0.0, {u0, Vs, 1.0, 0.0, 0.0, 1.0});
    bool been_below = false;
    double prev = 0.0; // V - Vs at previous step end (0 at the section start)
    try {
        while (solver.t() < t_max) {
            solver.step();
            const double cur = solver.y()[1] - Vs;
            if (std::hypot(solver.y()[0], cur) > escape_radius) return std::nullopt;
            if (cur < -1e-14) been_below = true;
            if (been_below && prev < 0.0 && cur >= 0.0) {
                // bisect the crossing on the dense output
                double lo = 0.0, hi = 1.0;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (solver.dense(mid)[1] - Vs < 0.0)
                        lo = mid;
                    else
                        hi = mid;
                }
                const double theta = 0.5 * (lo + hi);
                return ReturnData{solver.dense_t(theta), solver.dense(theta)};
            }
            prev = cur;
        }
    } catch (const NonFiniteState&) {
        return std::nullopt; // escape fast enough to blow up within one step
    } catch (const StepSizeUnderflow&) {
        return std::nullopt;
    }
    return std::nullopt;
}

inline std::vector<PhaseState> sample_period(const ValidatedModel& model, double c, PhaseState start,
                                             double T, std::size_t n, double tol,
                                             double* closure_out) {
    auto f = [&](double, const std::array<double, 2>& y, std::array<double, 2>& dy) {
        const PhaseState r = rhs({y[0], y[1]}, c, model);
        dy[0] = r.U;
        dy[1] = r.V;
    };
    ode::Dopri5<2, decltype(f)> solver(f, tol);
    solver.start(0.0, {start.U, start.V});
    std::vector<PhaseState> out(n);
    out[0] = start;
    std::size_t next = 1;
    std::array<double, 2> end{start.U, start.V};
    while (true) {
        double t = solver.step();
        while (next < n && double(next) * T / double(n) <= t) {
            const double target = double(next) * T / double(n);
            const double theta = (target - solver.step_begin()) / solver.step_size();
            auto y = solver.dense(theta);
            out[next] = {y[0], y[1]};
            ++next;
        }
        if (t >= T) {
            const double theta = (T - solver.step_begin()) / solver.step_size();
            auto y = solver.dense(theta);
            end = {y[0], y[1]};
            break;
        }
    }
    if (closure_out) *closure_out = std::hypot(end[0] - start.U, end[1] - start.V);
    return out;
}

} // namespace detail

/// Newton/Poincare shooting for the small-amplitude periodic orbit at
/// c = c0 +- epsilon (side from sign(a0), overridable for testing).
inline PeriodicOrbit find_periodic_orbit(const ValidatedModel& model, const HopfData& hopf,
                                         double epsilon, std::size_t n_samples = 512,
                                         const OrbitOptions& opts = {}) {
    if (!(epsilon > 0.0)) throw NoOrbitFound("epsilon must be positive");
    if (!fourier::is_power_of_two(n_samples) || n_samples < 64)
        throw EvaluationError("find_periodic_orbit: n_samples must be a power of two >= 64");
    const BifSide side = opts.force_side.value_or(hopf.side);
    const double c = hopf.c0 + (side == BifSide::above_c0 ? epsilon : -epsilon);
    const double tau = model.tau();
    if (!(c * c * tau < 1.0)) throw SubcharacteristicViolated(c, tau);

    const double Vs = model.spec.f(0.0);
    const double r0 = opts.initial_radius.value_or(std::sqrt(std::abs(hopf.d0 * epsilon / hopf.a0)));
    const double t_max = 6.0 * hopf.T0;
    const double tol = std::min(opts.tol, 1e-12);

    std::string last_failure = "Newton did not converge";
    for (double radius : {r0, 0.5 * r0, 2.0 * r0}) {
        double u = radius;
        bool converged = false;
        double period = 0.0;
        for (int it = 0; it < opts.max_newton; ++it) {
            auto ret = detail::poincare_return(model, c, u, Vs, t_max, 60.0 * r0 + 1.0, tol);
            if (!ret) {
                last_failure = "trajectory did not return to the section";
                break;
            }
            const double P = ret->state[0];
            const double phi = P - u;
            const PhaseState vel = rhs({ret->state[0], ret->state[1]}, c, model);
            // d/du of the return map, accounting for the varying return time
            const double dP = ret->state[2] - vel.U * ret->state[4] / vel.V;
            const double dphi = dP - 1.0;
            if (std::abs(dphi) < 1e-14) {
                last_failure = "singular return-map derivative";
                break;
            }
            const double u_next = u - phi / dphi;
            if (!(u_next > 0.0) || !std::isfinite(u_next)) {
                last_failure = "orbit collapsed to the rest state P0";
                break;
            }
            u = u_next;
            period = ret->time;
            if (std::abs(phi) <= 1e-12 * std::max(1.0, std::abs(u))) {
                converged = true;
                break;
            }
        }
        if (!converged) continue;
        if (u < 0.05 * radius) {
            last_failure = "orbit collapsed to the rest state P0";
            continue;
        }
        if (!(period > 0.0) || std::abs(period - hopf.T0) > 0.5 * hopf.T0) {
            last_failure = "converged cycle period is not within 50% of T0";
            continue;
        }

        PeriodicOrbit orbit;
        orbit.epsilon = epsilon;
        orbit.speed = c;
        orbit.tau = tau;
        orbit.period = period;
        orbit.samples = detail::sample_period(model, c, {u, Vs}, period, n_samples, tol,
                                              &orbit.closure_residual);
        if (orbit.closure_residual > 1e-9) {
            last_failure = "closure residual above 1e-9";
            continue;
        }
        std::vector<double> us(n_samples), vs(n_samples);
        for (std::size_t j = 0; j < n_samples; ++j) {
            us[j] = orbit.samples[j].U;
            vs[j] = orbit.samples[j].V;
            orbit.amplitude_u = std::max(orbit.amplitude_u, std::abs(orbit.samples[j].U));
            orbit.amplitude_v = std::max(orbit.amplitude_v, std::abs(orbit.samples[j].V - Vs));
        }
        orbit.u_interp = fourier::TrigInterp(us, period);
        orbit.v_interp = fourier::TrigInterp(vs, period);
        return orbit;
    }
    throw NoOrbitFound(last_failure + " (c = " + std::to_string(c) + ", epsilon = " +
                       std::to_string(epsilon) + ")");
}

/// Re-integrates the orbit once at tight tolerance and stores n uniform samples
/// with fresh trigonometric interpolation coefficients.
inline PeriodicOrbit resample_profile(const ValidatedModel& model, const PeriodicOrbit& orbit,
                                      std::size_t n) {
    if (!fourier::is_power_of_two(n) || n < 64)
        throw EvaluationError("resample_profile: n must be a power of two >= 64");
    PeriodicOrbit out = orbit;
    out.samples = detail::sample_period(model, orbit.speed, orbit.samples[0], orbit.period, n,
                                        1e-12, &out.closure_residual);
    if (out.closure_residual > 1e-9)
        throw NoOrbitFound("resampled profile fails periodicity at 1e-9");
    const double Vs = model.spec.f(0.0);
    std::vector<double> us(n), vs(n);
    out.amplitude_u = out.amplitude_v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        us[j] = out.samples[j].U;
        vs[j] = out.samples[j].V;
        out.amplitude_u = std::max(out.amplitude_u, std::abs(us[j]));
        out.amplitude_v = std::max(out.amplitude_v, std::abs(vs[j] - Vs));
    }
    out.u_interp = fourier::TrigInterp(us, orbit.period);
    out.v_interp = fourier::TrigInterp(vs, orbit.period);
    return out;
}

struct OrbitDiagnostics {
    double period_slope;        // (T_eps - T0) / eps
    double amplitude_u_scaled;  // amplitude_u / sqrt(eps)
    double amplitude_v_scaled;  // amplitude_v / sqrt(eps)
    double closure_residual;
    double subchar_margin;      // 1 - c(eps)^2 tau
};

inline OrbitDiagnostics orbit_diagnostics(const PeriodicOrbit& orbit, const HopfData& hopf) {
    const double se = std::sqrt(orbit.epsilon);
    return {(orbit.period - hopf.T0) / orbit.epsilon, orbit.amplitude_u / se,
            orbit.amplitude_v / se, orbit.closure_residual,
            1.0 - orbit.speed * orbit.speed * orbit.tau};
}

} // namespace hypwave
