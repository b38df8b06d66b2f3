#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hypwave/errors.hpp"
#include "hypwave/fourier.hpp"
#include "hypwave/hopf.hpp"
#include "hypwave/model.hpp"
#include "hypwave/orbit.hpp"

namespace hypwave {

using cplx = std::complex<double>;

/// Complex 2x2 matrix with value semantics; entries (a b; c d).
struct Mat2c {
    cplx a{}, b{}, c{}, d{};

    static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }
    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }

    Mat2c operator+(const Mat2c& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2c operator-(const Mat2c& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2c operator*(const Mat2c& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2c operator*(cplx s) const { return {a * s, b * s, c * s, d * s}; }
    friend Mat2c operator*(cplx s, const Mat2c& m) { return m * s; }
};

/// Rescaled periodic coefficients of the Bloch family on y in [0, pi), plus
/// the sqrt(eps) perturbation split around the constant-coefficient operator.
struct BlochCoefficients {
    double period = 0.0;  // T_eps
    double speed = 0.0;   // c(eps)
    double tau = 0.0;
    double c0 = 0.0;
    std::size_t n = 0;
    std::vector<double> a1, b1; // samples at y_j = j*pi/n

    // split fields (eps_split = sqrt(eps); zero for constant data)
    double a1_0 = 0.0, b1_0 = 0.0;
    double T0 = 0.0, T1 = 0.0, c1 = 0.0;
    double eps_split = 0.0;
    std::vector<double> a1_1, b1_1;
    bool degenerate_coupling = false; // a1_0 == c0 (b1_0 tau + T0), i.e. f'(0) = 0

    fourier::TrigInterp a1_interp, b1_interp;

    Mat2c A() const { return {speed, -1.0, -1.0, speed * tau}; }
    Mat2c B() const { return {1.0, 0.0, 0.0, tau}; }
    double detA() const { return speed * speed * tau - 1.0; }
};

namespace detail {

inline void finish_coefficients(BlochCoefficients& co) {
    co.a1_interp = fourier::TrigInterp(co.a1, std::numbers::pi);
    co.b1_interp = fourier::TrigInterp(co.b1, std::numbers::pi);
    co.a1_1.resize(co.n);
    co.b1_1.resize(co.n);
    if (co.eps_split > 0.0) {
        for (std::size_t j = 0; j < co.n; ++j) {
            co.a1_1[j] = (co.a1[j] - co.a1_0) / co.eps_split;
            co.b1_1[j] = (co.b1[j] - co.b1_0) / co.eps_split;
        }
    }
    co.degenerate_coupling = std::abs(co.a1_0 - co.c0 * (co.b1_0 * co.tau + co.T0)) <= 1e-12;
}

} // namespace detail

/// Samples a1(y) = T f'(U(T y/pi)), b1(y) = T g'(U(T y/pi)) on the uniform
/// y-grid and attaches the perturbation split.
inline BlochCoefficients build_coefficients(const PeriodicOrbit& orbit, const ValidatedModel& model,
                                            const HopfData& hopf, std::size_t n) {
    if (!fourier::is_power_of_two(n) || n < 128)
        throw EvaluationError("build_coefficients: n must be a power of two >= 128");
    BlochCoefficients co;
    co.period = orbit.period;
    co.speed = orbit.speed;
    co.tau = orbit.tau;
    co.c0 = hopf.c0;
    co.n = n;
    co.a1.resize(n);
    co.b1.resize(n);
    const bool direct = orbit.samples.size() == n;
    for (std::size_t j = 0; j < n; ++j) {
        const double xi = orbit.period * double(j) / double(n);
        const double U = direct ? orbit.samples[j].U : orbit.u_interp(xi);
        co.a1[j] = orbit.period * model.spec.f_prime(U);
        co.b1[j] = orbit.period * model.spec.g_prime(U);
    }
    co.T0 = hopf.T0;
    co.a1_0 = hopf.T0 * model.d0.fp;
    co.b1_0 = hopf.T0 * model.d0.gp;
    co.eps_split = std::sqrt(orbit.epsilon);
    co.T1 = (orbit.period - hopf.T0) / co.eps_split;
    co.c1 = (orbit.speed - hopf.c0) / co.eps_split;
    detail::finish_coefficients(co);
    return co;
}

/// Constant (eps = 0) coefficient data around the zero-amplitude limit.
inline BlochCoefficients constant_coefficients(const ValidatedModel& model, const HopfData& hopf,
                                               std::size_t n) {
    if (!fourier::is_power_of_two(n) || n < 128)
        throw EvaluationError("constant_coefficients: n must be a power of two >= 128");
    BlochCoefficients co;
    co.period = hopf.T0;
    co.speed = hopf.c0;
    co.tau = model.tau();
    co.c0 = hopf.c0;
    co.n = n;
    co.T0 = hopf.T0;
    co.a1_0 = hopf.T0 * model.d0.fp;
    co.b1_0 = hopf.T0 * model.d0.gp;
    co.a1.assign(n, co.a1_0);
    co.b1.assign(n, co.b1_0);
    detail::finish_coefficients(co);
    return co;
}

namespace detail {

inline Mat2c inverse_A(const BlochCoefficients& co) {
    const double det = co.detA();
    if (det == 0.0) throw CharacteristicSpeed(co.speed, co.tau);
    const double inv = 1.0 / det;
    return {co.speed * co.tau * inv, inv, inv, co.speed * inv};
}

} // namespace detail

/// Coefficient matrix of the Bloch first-order system,
/// D(y, lhat, theta) = (1/pi) A^{-1} (lhat B - i theta A - Cbar(y)).
inline Mat2c matrix_D(double y, cplx lambda_hat, double theta, const BlochCoefficients& co) {
    if (co.detA() >= 0.0) throw CharacteristicSpeed(co.speed, co.tau);
    const Mat2c Ainv = detail::inverse_A(co);
    const double a = co.a1_interp.size() ? co.a1_interp(y) : 0.0;
    const double b = co.b1_interp.size() ? co.b1_interp(y) : 0.0;
    const Mat2c Cbar{b, 0.0, a, -co.period};
    const Mat2c B = co.B();
    Mat2c M = Ainv * (lambda_hat * B - Cbar);
    const cplx it(0.0, theta);
    M.a -= it;
    M.d -= it;
    return M * (1.0 / std::numbers::pi);
}

namespace detail {

// Dense half-grid tables of a1, b1 for the fixed-step RK4 monodromy sweep.
struct StageTables {
    std::vector<double> a, b; // values at y = k*pi/(2*steps), k = 0..2*steps
    std::size_t steps;
};

inline StageTables stage_tables(const BlochCoefficients& co, std::size_t steps) {
    StageTables t;
    t.steps = steps;
    const std::size_t m = 2 * steps;
    if (co.a1_interp.size()) {
        t.a = co.a1_interp.dense(m);
        t.b = co.b1_interp.dense(m);
    } else {
        t.a.assign(m, 0.0);
        t.b.assign(m, 0.0);
    }
    t.a.push_back(t.a[0]); // y = pi wraps to y = 0
    t.b.push_back(t.b[0]);
    return t;
}

} // namespace detail

/// Monodromy matrix F(pi) of u_y = D(y, lhat, theta) u, F(0) = I, by
/// fixed-step classical RK4 with trig-interpolated coefficients.
/// steps = 0 selects the default max(4n, 1024), rounded up to a power of two.
inline Mat2c monodromy(cplx lambda_hat, double theta, const BlochCoefficients& co,
                       std::size_t steps = 0) {
    if (co.detA() >= 0.0) throw CharacteristicSpeed(co.speed, co.tau);
    std::size_t want = steps == 0 ? std::max<std::size_t>(4 * co.n, 1024) : steps;
    want = std::max(want, 4 * co.n);
    const std::size_t nsteps = fourier::next_power_of_two(want);
    const detail::StageTables tab = detail::stage_tables(co, nsteps);

    const Mat2c Ainv = detail::inverse_A(co);
    const Mat2c AinvB = Ainv * co.B();
    const double invpi = 1.0 / std::numbers::pi;
    const cplx it(0.0, theta);
    // D(y) = (1/pi) (lhat Ainv B - Ainv Cbar(y) - i theta I)
    auto D_at = [&](std::size_t idx) {
        const double a = tab.a[idx];
        const double b = tab.b[idx];
        // Ainv * Cbar with Cbar = (b 0; a -T)
        const Mat2c AC{Ainv.a * b + Ainv.b * a, Ainv.b * (-co.period),
                       Ainv.c * b + Ainv.d * a, Ainv.d * (-co.period)};
        Mat2c M = lambda_hat * AinvB - AC;
        M.a -= it;
        M.d -= it;
        return M * invpi;
    };

    Mat2c F = Mat2c::identity();
    const double h = std::numbers::pi / double(nsteps);
    for (std::size_t k = 0; k < nsteps; ++k) {
        const Mat2c D0 = D_at(2 * k);
        const Mat2c Dm = D_at(2 * k + 1);
        const Mat2c D1 = D_at(2 * k + 2);
        const Mat2c k1 = D0 * F;
        const Mat2c k2 = Dm * (F + (0.5 * h) * k1);
        const Mat2c k3 = Dm * (F + (0.5 * h) * k2);
        const Mat2c k4 = D1 * (F + h * k3);
        F = F + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    for (cplx v : {F.a, F.b, F.c, F.d})
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NonFiniteState(std::numbers::pi);
    return F;
}

/// det F(pi) from the Abel-Liouville identity exp(int_0^pi tr D dy); the
/// trace integral is exact because only the mean of the coefficients enters.
inline cplx liouville_determinant(cplx lambda_hat, double theta, const BlochCoefficients& co) {
    const Mat2c Ainv = detail::inverse_A(co);
    const Mat2c B = co.B();
    double mean_a = 0.0, mean_b = 0.0;
    if (!co.a1.empty()) {
        for (double v : co.a1) mean_a += v;
        for (double v : co.b1) mean_b += v;
        mean_a /= double(co.a1.size());
        mean_b /= double(co.b1.size());
    }
    const cplx trAinvB = Ainv.a * B.a + Ainv.d * B.d; // B diagonal
    const cplx tr_integral = lambda_hat * trAinvB -
                             (Ainv.a * mean_b + Ainv.b * mean_a - Ainv.d * co.period) -
                             cplx(0.0, 2.0 * theta);
    return std::exp(tr_integral);
}

struct EvansEvaluation {
    cplx lambda_hat;
    double theta = 0.0;
    cplx value;
    Mat2c monodromy; // fundamental matrix F(pi) of the untwisted system
};

/// Periodic Evans function D(lhat, theta) = det(F(pi) - e^{i theta} I), with
/// F(pi) the fundamental matrix of the quasi-periodic (untwisted) system;
/// the Bloch parameter enters through the Floquet multiplier e^{i theta}.
/// The determinant is expanded through the characteristic polynomial with
/// det F(pi) supplied by the Liouville identity; the naive 2x2 determinant
/// cancels catastrophically once the entries reach ~1/sqrt(machine eps).
inline EvansEvaluation evans(cplx lambda_hat, double theta, const BlochCoefficients& co,
                             std::size_t steps = 0) {
    EvansEvaluation ev;
    ev.lambda_hat = lambda_hat;
    ev.theta = theta;
    ev.monodromy = monodromy(lambda_hat, 0.0, co, steps);
    const cplx mu = std::exp(cplx(0.0, theta));
    ev.value = liouville_determinant(lambda_hat, 0.0, co) - mu * ev.monodromy.trace() + mu * mu;
    return ev;
}

/// Dispersion polynomials of the constant-coefficient problem,
/// q(l) = c0 (l tau + T0) - c0 tau (b1_0 - l) - a1_0,
/// p(l) = (1 - c0^2 tau)(b1_0 - l)(l tau + T0).
inline std::pair<cplx, cplx> dispersion_qp(cplx lambda, const BlochCoefficients& co) {
    const cplx q = co.c0 * (lambda * co.tau + co.T0) - co.c0 * co.tau * (co.b1_0 - lambda) - co.a1_0;
    const cplx p = (1.0 - co.c0 * co.c0 * co.tau) * (co.b1_0 - lambda) * (lambda * co.tau + co.T0);
    return {q, p};
}

/// Closed-form Evans function of the eps = 0 operator:
/// (e^{pi zeta1} - e^{i theta})(e^{pi zeta2} - e^{i theta}) where zeta_{1,2}
/// are the eigenvalues of D(lambda) = (1/pi) A0^{-1} (lambda B - Cbar0),
/// i.e. the roots of zeta^2 + q zeta + p = 0 scaled by 1/(pi (1 - c0^2 tau)).
inline cplx constant_evans(cplx lambda, double theta, const BlochCoefficients& co) {
    const auto [q, p] = dispersion_qp(lambda, co);
    const double s = std::numbers::pi * (1.0 - co.c0 * co.c0 * co.tau);
    const cplx disc = std::sqrt(q * q - 4.0 * p);
    const cplx z1 = (-q - disc) / (2.0 * s);
    const cplx z2 = (-q + disc) / (2.0 * s);
    const cplx mu = std::exp(cplx(0.0, theta));
    return (std::exp(std::numbers::pi * z1) - mu) * (std::exp(std::numbers::pi * z2) - mu);
}

/// Unperturbed eigenpair of the constant-coefficient operator: lambda0 = b1_0 with constant
/// eigenfunction u0 = (1, a1_0 / (tau b1_0 + T0)).
inline std::pair<double, std::array<double, 2>> unperturbed_eigenpair(const BlochCoefficients& co) {
    const double lambda0 = co.b1_0;
    const std::array<double, 2> u0{1.0, co.a1_0 / (co.tau * co.b1_0 + co.T0)};
    // residual of B^{-1} Cbar0 u0 = lambda0 u0
    const double r1 = co.b1_0 * u0[0] - lambda0 * u0[0];
    const double r2 = (co.a1_0 * u0[0] - co.T0 * u0[1]) / co.tau - lambda0 * u0[1];
    if (std::hypot(r1, r2) > 1e-12)
        throw EvaluationError("unperturbed eigenpair residual above 1e-12");
    return {lambda0, u0};
}

struct Window {
    double re_lo, re_hi, im_lo, im_hi;
};

namespace detail {

struct ContourPoint {
    cplx z;
    cplx value;
};

inline cplx eval_evans(cplx z, double theta, const BlochCoefficients& co, std::size_t steps) {
    return evans(z, theta, co, steps).value;
}

// Accumulated phase along the segment, refining while the jump exceeds pi/2.
inline double phase_along(cplx z0, cplx f0, cplx z1, cplx f1, double theta,
                          const BlochCoefficients& co, std::size_t steps, int depth) {
    const double jump = std::arg(f1 / f0);
    if (std::abs(jump) <= std::numbers::pi / 2.0 || depth >= 24) return jump;
    const cplx zm = 0.5 * (z0 + z1);
    const cplx fm = eval_evans(zm, theta, co, steps);
    if (std::abs(fm) < 1e-6) throw ContourTooClose("refined midpoint |D| < 1e-6");
    return phase_along(z0, f0, zm, fm, theta, co, steps, depth + 1) +
           phase_along(zm, fm, z1, f1, theta, co, steps, depth + 1);
}

} // namespace detail

/// Winding number of D(., theta) around 0 along the rectangle boundary;
/// counts Evans roots (Bloch eigenvalues) inside by the argument principle.
inline int count_roots(const Window& win, double theta, const BlochCoefficients& co,
                       std::size_t n_contour = 256, std::size_t steps = 0) {
    n_contour = std::max<std::size_t>(n_contour, 256);
    const cplx corners[4] = {{win.re_lo, win.im_lo},
                             {win.re_hi, win.im_lo},
                             {win.re_hi, win.im_hi},
                             {win.re_lo, win.im_hi}};
    std::vector<detail::ContourPoint> pts;
    pts.reserve(4 * n_contour + 1);
    for (int side = 0; side < 4; ++side) {
        const cplx z0 = corners[side];
        const cplx z1 = corners[(side + 1) % 4];
        for (std::size_t k = 0; k < n_contour; ++k) {
            const cplx z = z0 + (z1 - z0) * (double(k) / double(n_contour));
            const cplx f = detail::eval_evans(z, theta, co, steps);
            if (std::abs(f) < 1e-6)
                throw ContourTooClose("|D| < 1e-6 at contour sample");
            pts.push_back({z, f});
        }
    }
    pts.push_back(pts.front());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        total += detail::phase_along(pts[k].z, pts[k].value, pts[k + 1].z, pts[k + 1].value, theta,
                                     co, steps, 0);
    return int(std::lround(total / (2.0 * std::numbers::pi)));
}

/// Derivative-free secant refinement in the complex plane until |D| <= 1e-10.
inline cplx refine_root(cplx guess, double theta, const BlochCoefficients& co,
                        double* residual_out = nullptr, std::size_t steps = 0) {
    constexpr double target = 1e-10;
    cplx x0 = guess;
    cplx f0 = detail::eval_evans(x0, theta, co, steps);
    if (!std::isfinite(std::abs(f0))) throw NoConvergence("Evans value at guess is not finite");
    if (std::abs(f0) <= target) {
        if (residual_out) *residual_out = std::abs(f0);
        return x0;
    }
    cplx x1 = guess + 1e-4 * std::max(1.0, std::abs(guess));
    cplx f1 = detail::eval_evans(x1, theta, co, steps);
    for (int it = 0; it < 50; ++it) {
        if (f1 == f0) break;
        const cplx x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = detail::eval_evans(x1, theta, co, steps);
        if (std::abs(f1) <= target) {
            if (residual_out) *residual_out = std::abs(f1);
            return x1;
        }
    }
    throw NoConvergence("secant refinement did not reach |D| <= 1e-10 in 50 iterations");
}

struct SpectrumPoint {
    double theta;
    cplx lambda_hat;
    cplx lambda; // lambda_hat / T_eps
    double residual;
};

struct SpectrumCurve {
    std::vector<SpectrumPoint> points;
};

/// Continuation of a refined root along a monotone theta grid; aborts with
/// BranchLost when a continuation jump exceeds 10x the median step.
inline SpectrumCurve trace_curve(cplx seed_root, std::span<const double> theta_grid,
                                 const BlochCoefficients& co, std::size_t steps = 0) {
    if (theta_grid.empty()) throw EvaluationError("trace_curve: empty theta grid");
    SpectrumCurve curve;
    std::vector<double> jumps;
    double res = 0.0;
    cplx root = refine_root(seed_root, theta_grid[0], co, &res, steps);
    curve.points.push_back({theta_grid[0], root, root / co.period, res});
    for (std::size_t k = 1; k < theta_grid.size(); ++k) {
        const cplx next = refine_root(root, theta_grid[k], co, &res, steps);
        const double jump = std::abs(next - root);
        if (jumps.size() >= 3) {
            std::vector<double> sorted = jumps;
            std::sort(sorted.begin(), sorted.end());
            const double median = std::max(sorted[sorted.size() / 2], 1e-12);
            if (jump > 10.0 * median)
                throw BranchLost("continuation jump " + std::to_string(jump) +
                                 " exceeds 10x median step");
        }
        jumps.push_back(jump);
        root = next;
        curve.points.push_back({theta_grid[k], root, root / co.period, res});
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.theta < b.theta; });
    return curve;
}

/// Fourier collocation spectrum of the Bloch operator
/// B^{-1}(A (i theta + pi d_y) + Cbar(y)) in the basis e^{2iky}, |k| <= M.
/// Independent of the Evans route; dense non-symmetric eigensolve.
inline std::vector<cplx> collocation_spectrum(double theta, const BlochCoefficients& co,
                                              int modes) {
    if (modes < 8) throw EvaluationError("collocation_spectrum: modes must be >= 8");
    const int M = modes;
    const int nb = 2 * M + 1;

    // Fourier coefficients of a1, b1 (centered); zero when the grid cannot resolve them.
    auto coef = [&](const fourier::TrigInterp& ti, long m) -> cplx {
        if (!ti.size()) return 0.0;
        return ti.mode(m);
    };

    Eigen::MatrixXcd Mat = Eigen::MatrixXcd::Zero(2 * nb, 2 * nb);
    const cplx I(0.0, 1.0);
    for (int i = 0; i < nb; ++i) {
        const int k = i - M;
        for (int j = 0; j < nb; ++j) {
            const int l = j - M;
            cplx blk[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
            if (k == l) {
                const cplx w = I * (theta + 2.0 * std::numbers::pi * double(k));
                blk[0][0] += co.speed * w;
                blk[0][1] += -w;
                blk[1][0] += -w;
                blk[1][1] += co.speed * co.tau * w;
                blk[1][1] += -co.period; // Cbar corner
            }
            const cplx am = coef(co.a1_interp, k - l);
            const cplx bm = coef(co.b1_interp, k - l);
            blk[0][0] += bm;
            blk[1][0] += am;
            // apply B^{-1} = diag(1, 1/tau)
            Mat(2 * i, 2 * j) = blk[0][0];
            Mat(2 * i, 2 * j + 1) = blk[0][1];
            Mat(2 * i + 1, 2 * j) = blk[1][0] / co.tau;
            Mat(2 * i + 1, 2 * j + 1) = blk[1][1] / co.tau;
        }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Mat, /*computeEigenvectors=*/false);
    std::vector<cplx> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.begin(), out.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

enum class Verdict { unstable, no_unstable_root_found };

inline const char* to_string(Verdict v) {
    return v == Verdict::unstable ? "unstable" : "no_unstable_root_found";
}

struct InstabilityWitness {
    double theta;
    cplx lambda_hat;
    double re_lambda; // Re(lambda_hat) / T_eps
};

struct InstabilityEvidence {
    double evans_residual = 0.0;
    double collocation_distance = 0.0;
    int root_count = 0;
    double window_halfwidth = 0.0;
};

struct InstabilityReport {
    Verdict verdict = Verdict::no_unstable_root_found;
    std::optional<InstabilityWitness> witness;
    InstabilityEvidence evidence;
};

struct VerdictOptions {
    std::size_t n = 512;            // coefficient grid
    std::size_t monodromy_steps = 0; // 0 = default
    int collocation_modes = 32;
    std::optional<Window> window;   // override for the root-count confirm
};

namespace detail {

inline InstabilityReport verdict_from_coefficients(const BlochCoefficients& co, double epsilon,
                                                   const VerdictOptions& opts) {
    const double lambda0 = co.b1_0;
    double residual = 0.0;
    const cplx root = refine_root(lambda0, 0.0, co, &residual, opts.monodromy_steps);

    // The default window tracks the measured drift: the 3*sqrt(eps) floor alone
    // under-covers it for slowly rotating regimes (tau well below tau_bar).
    const double drift = std::abs(root - lambda0);
    const double w = std::max({0.3, 3.0 * std::sqrt(epsilon), 1.5 * drift});
    const Window win = opts.window.value_or(
        Window{lambda0 - w, lambda0 + w, -w, w});
    const int count = count_roots(win, 0.0, co, 256, opts.monodromy_steps);

    const std::vector<cplx> eigs = collocation_spectrum(0.0, co, opts.collocation_modes);
    double dist = std::numeric_limits<double>::infinity();
    for (cplx e : eigs) dist = std::min(dist, std::abs(e - root));
    if (dist > 1e-4) throw OracleDisagreement(dist);

    InstabilityReport rep;
    rep.evidence = {residual, dist, count, 0.5 * (win.re_hi - win.re_lo)};
    const bool unstable =
        root.real() > 1e-6 && count == 1 && residual <= 1e-8 && dist <= 1e-5;
    rep.verdict = unstable ? Verdict::unstable : Verdict::no_unstable_root_found;
    rep.witness = InstabilityWitness{0.0, root, root.real() / co.period};
    return rep;
}

} // namespace detail

/// Full instability check of a computed wave: refines the Evans root seeded at
/// lambda0 = T0 g'(0), confirms simplicity by root counting, and cross-checks
/// against the collocation spectrum. Disagreement beyond 1e-4 is a hard error.
inline InstabilityReport instability_verdict(const PeriodicOrbit& orbit,
                                             const ValidatedModel& model, const HopfData& hopf,
                                             const VerdictOptions& opts = {}) {
    const BlochCoefficients co = build_coefficients(orbit, model, hopf, opts.n);
    return detail::verdict_from_coefficients(co, orbit.epsilon, opts);
}

/// Verdict on the unperturbed (eps = 0) operator alone.
inline InstabilityReport instability_verdict_constant(const ValidatedModel& model,
                                                     const HopfData& hopf,
                                                     const VerdictOptions& opts = {}) {
    const BlochCoefficients co = constant_coefficients(model, hopf, std::max<std::size_t>(opts.n, 128));
    return detail::verdict_from_coefficients(co, 0.0, opts);
}

} // namespace hypwave
