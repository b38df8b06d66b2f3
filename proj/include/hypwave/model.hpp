#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypwave/errors.hpp"

namespace hypwave {

using ScalarFn = std::function<double(double)>;

/// Derivatives of the flux and the source at u = 0, in the order
/// f'(0), f''(0), f'''(0), g'(0), g''(0), g'''(0).
struct DerivsAtZero {
    double fp, fpp, fppp;
    double gp, gpp, gppp;
};

/// Phase-plane point of the traveling-wave system.
struct PhaseState {
    double U = 0.0;
    double V = 0.0;
};

struct Mat2 {
    double a11, a12, a21, a22;
};

/// Hypothesis tolerances; fixed project-wide.
inline constexpr double kHypothesisTol = 1e-12;

/// The model data: advection flux f, logistic source g, relaxation time tau.
struct ModelSpec {
    std::string name;
    ScalarFn f, f_prime;
    ScalarFn g, g_prime;
    std::optional<DerivsAtZero> derivs; // exact values when the model knows them
    double tau = 0.0;
    double delta = 0.0; // left extent of the g<0 interval; 0 unless overridden
    std::vector<double> f_poly, g_poly; // ascending coefficients; empty for non-polynomial models
};

namespace detail {

inline double poly_eval(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
    return acc;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
    if (d.empty()) d.push_back(0.0);
    return d;
}

inline double poly_coeff(const std::vector<double>& c, std::size_t k) {
    return k < c.size() ? c[k] : 0.0;
}

} // namespace detail

/// Built-in closed-form models. Currently only "burgers-fisher":
/// f(u) = u^2/2, g(u) = u(1-u).
inline ModelSpec builtin_model(const std::string& name, double tau) {
    if (name != "burgers-fisher") throw UnknownModel(name);
    ModelSpec spec;
    spec.name = name;
    spec.f = [](double u) { return 0.5 * u * u; };
    spec.f_prime = [](double u) { return u; };
    spec.g = [](double u) { return u * (1.0 - u); };
    spec.g_prime = [](double u) { return 1.0 - 2.0 * u; };
    spec.derivs = DerivsAtZero{0.0, 1.0, 0.0, 1.0, -2.0, 0.0};
    spec.tau = tau;
    return spec;
}

/// Polynomial model with exact derivative data, coefficients in ascending degree.
inline ModelSpec polynomial_model(std::string name, std::vector<double> f_coeffs,
                                  std::vector<double> g_coeffs, double tau, double delta = 0.0) {
    ModelSpec spec;
    spec.name = std::move(name);
    spec.f_poly = std::move(f_coeffs);
    spec.g_poly = std::move(g_coeffs);
    auto fd = detail::poly_derivative(spec.f_poly);
    auto gd = detail::poly_derivative(spec.g_poly);
    spec.f = [c = spec.f_poly](double u) { return detail::poly_eval(c, u); };
    spec.f_prime = [c = fd](double u) { return detail::poly_eval(c, u); };
    spec.g = [c = spec.g_poly](double u) { return detail::poly_eval(c, u); };
    spec.g_prime = [c = gd](double u) { return detail::poly_eval(c, u); };
    spec.derivs = DerivsAtZero{detail::poly_coeff(spec.f_poly, 1), 2.0 * detail::poly_coeff(spec.f_poly, 2),
                               6.0 * detail::poly_coeff(spec.f_poly, 3), detail::poly_coeff(spec.g_poly, 1),
                               2.0 * detail::poly_coeff(spec.g_poly, 2), 6.0 * detail::poly_coeff(spec.g_poly, 3)};
    spec.tau = tau;
    spec.delta = delta;
    return spec;
}

/// Callback model: derivatives at zero come from finite differences.
inline ModelSpec callback_model(std::string name, ScalarFn f, ScalarFn f_prime, ScalarFn g,
                                ScalarFn g_prime, double tau, double delta = 0.0) {
    ModelSpec spec;
    spec.name = std::move(name);
    spec.f = std::move(f);
    spec.f_prime = std::move(f_prime);
    spec.g = std::move(g);
    spec.g_prime = std::move(g_prime);
    spec.tau = tau;
    spec.delta = delta;
    return spec;
}

namespace detail {

// Fourth-order central differences with one Richardson step (h, h/2).
inline double central_d1(const ScalarFn& phi, double h) {
    return (phi(-2.0 * h) - 8.0 * phi(-h) + 8.0 * phi(h) - phi(2.0 * h)) / (12.0 * h);
}

inline double central_d2(const ScalarFn& phi, double h) {
    return (-phi(-2.0 * h) + 16.0 * phi(-h) - 30.0 * phi(0.0) + 16.0 * phi(h) - phi(2.0 * h)) /
           (12.0 * h * h);
}

inline double richardson_d1(const ScalarFn& phi) {
    const double h = 1e-2;
    return (16.0 * central_d1(phi, h / 2.0) - central_d1(phi, h)) / 15.0;
}

inline double richardson_d2(const ScalarFn& phi) {
    const double h = 2e-2;
    return (16.0 * central_d2(phi, h / 2.0) - central_d2(phi, h)) / 15.0;
}

} // namespace detail

/// Derivatives of f and g at the unstable rest state u = 0. Exact when the
/// spec carries them; otherwise finite differences on f', g' (relative
/// accuracy target 1e-8 for smooth data).
inline DerivsAtZero derivs_at_zero(const ModelSpec& spec) {
    if (spec.derivs) return *spec.derivs;
    DerivsAtZero d{};
    d.fp = spec.f_prime(0.0);
    d.gp = spec.g_prime(0.0);
    d.fpp = detail::richardson_d1(spec.f_prime);
    d.gpp = detail::richardson_d1(spec.g_prime);
    d.fppp = detail::richardson_d2(spec.f_prime);
    d.gppp = detail::richardson_d2(spec.g_prime);
    for (double v : {d.fp, d.fpp, d.fppp, d.gp, d.gpp, d.gppp})
        if (!std::isfinite(v)) throw EvaluationError("non-finite derivative of f or g near u = 0");
    return d;
}

struct TauThresholds {
    double tau_max;
    double tau_one;
    double tau_bar;
};

namespace detail {

// Golden-section maximization of |g'| on [lo, hi].
inline double golden_max(const ScalarFn& gp, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = std::abs(gp(x1));
    double f2 = std::abs(gp(x2));
    for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = std::abs(gp(x2));
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = std::abs(gp(x1));
        }
    }
    return std::max(f1, f2);
}

} // namespace detail

/// tau_max = 1 / sup |g'| over [-delta, 1] (dense sampling, locally refined),
/// tau_one from the subcharacteristic root formula, tau_bar = min of the two.
inline TauThresholds tau_thresholds(const ModelSpec& spec) {
    const DerivsAtZero d = derivs_at_zero(spec);
    if (!(d.gp > 0.0)) throw HypothesisViolation("g'(0) > 0");

    const double lo = -spec.delta, hi = 1.0;
    const int n = 10000;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        const double u = lo + (hi - lo) * double(i) / double(n);
        const double v = std::abs(spec.g_prime(u));
        if (!std::isfinite(v)) throw EvaluationError("non-finite g' during threshold scan");
        if (v > best) { best = v; best_i = i; }
    }
    const double h = (hi - lo) / double(n);
    const double wl = std::max(lo, lo + (best_i - 1) * h);
    const double wr = std::min(hi, lo + (best_i + 1) * h);
    best = std::max(best, detail::golden_max(spec.g_prime, wl, wr));

    const double sum = d.fp * d.fp + 2.0 * d.gp;
    const double disc = sum * sum - 4.0 * d.gp * d.gp;
    const double tau_one = (sum - std::sqrt(std::max(disc, 0.0))) / (2.0 * d.gp * d.gp);
    const double tau_max = 1.0 / best;
    return {tau_max, tau_one, std::min(tau_max, tau_one)};
}

/// Model with hypotheses verified and admissibility thresholds attached.
struct ValidatedModel {
    ModelSpec spec;
    DerivsAtZero d0;
    double tau_max = 0.0;
    double tau_one = 0.0;
    double tau_bar = 0.0;
    bool admissible = false;

    double tau() const { return spec.tau; }
};

/// Checks the logistic-type hypotheses on g and the admissible tau range.
/// Throws HypothesisViolation / TauOutOfRange; on success admissible is true.
inline ValidatedModel validate(const ModelSpec& spec) {
    if (!(spec.tau > 0.0)) throw HypothesisViolation("tau > 0");
    if (std::abs(spec.g(0.0)) > kHypothesisTol) throw HypothesisViolation("g(0) = 0");
    if (std::abs(spec.g(1.0)) > kHypothesisTol) throw HypothesisViolation("g(1) = 0");
    const DerivsAtZero d = derivs_at_zero(spec);
    if (!(d.gp > 0.0)) throw HypothesisViolation("g'(0) > 0");
    if (!(spec.g_prime(1.0) < 0.0)) throw HypothesisViolation("g'(1) < 0");
    for (int i = 1; i <= 1000; ++i) {
        const double u = double(i) / 1001.0;
        if (!(spec.g(u) > 0.0)) throw HypothesisViolation("g > 0 on (0,1)");
    }
    const TauThresholds thr = tau_thresholds(spec);
    if (!(spec.tau < thr.tau_bar)) throw TauOutOfRange(spec.tau, thr.tau_bar);

    ValidatedModel m;
    m.spec = spec;
    m.d0 = d;
    m.tau_max = thr.tau_max;
    m.tau_one = thr.tau_one;
    m.tau_bar = thr.tau_bar;
    m.admissible = true;
    return m;
}

namespace detail {

inline double subchar_factor(double c, double tau) {
    const double s = 1.0 - c * c * tau;
    if (!(s > 0.0)) throw CharacteristicSpeed(c, tau);
    return 1.0 / s;
}

} // namespace detail

/// Right-hand side of the traveling-wave system in the phase plane.
inline PhaseState rhs(const PhaseState& state, double c, const ValidatedModel& model) {
    const double tau = model.tau();
    const double k = detail::subchar_factor(c, tau);
    const double fU = model.spec.f(state.U);
    const double gU = model.spec.g(state.U);
    return {k * (c * tau * gU + fU - state.V), k * (gU + c * (fU - state.V))};
}

/// Jacobian of rhs with respect to (U, V).
inline Mat2 jacobian(const PhaseState& state, double c, const ValidatedModel& model) {
    const double tau = model.tau();
    const double k = detail::subchar_factor(c, tau);
    const double fp = model.spec.f_prime(state.U);
    const double gp = model.spec.g_prime(state.U);
    return {k * (c * tau * gp + fp), -k, k * (gp + c * fp), -k * c};
}

} // namespace hypwave
