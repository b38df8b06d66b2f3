#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "hypwave/errors.hpp"
#include "hypwave/model.hpp"

namespace hypwave {

enum class BifSide { above_c0, below_c0 };
enum class Criticality { subcritical, supercritical };

inline const char* to_string(BifSide s) { return s == BifSide::above_c0 ? "above_c0" : "below_c0"; }
inline const char* to_string(Criticality c) {
    return c == Criticality::subcritical ? "subcritical" : "supercritical";
}

/// Hopf bifurcation data at the rest state P0.
struct HopfData {
    double c0;      // critical wave speed
    double omega0;  // frequency at criticality
    double a0;      // first Lyapunov coefficient
    double d0;      // transversality d(alpha)/dc at c0
    double T0;      // limit period 2*pi/omega0
    BifSide side;
    Criticality criticality;
};

/// Linearization eigenvalues zeta+- = alpha(c) +- i beta(c) at P0.
struct EquilibriumEigen {
    double c;
    double alpha;
    double beta; // imaginary part when the discriminant is negative, else 0
    std::complex<double> zeta_plus, zeta_minus;
};

inline double critical_speed(const ValidatedModel& model) {
    return model.d0.fp / (1.0 - model.tau() * model.d0.gp);
}

inline double hopf_frequency(const ValidatedModel& model) {
    const double c0 = critical_speed(model);
    return std::sqrt((1.0 - c0 * c0 * model.tau()) * model.d0.gp);
}

inline double transversality(const ValidatedModel& model) {
    return 0.5 * (model.tau() * model.d0.gp - 1.0);
}

/// First Lyapunov coefficient, computed two ways: the reduced closed form and
/// the full normal-form template assembled from all partials of (F, G) at
/// (P0, c0). The two assemblies must agree to 1e-10; a mismatch means a
/// transcription bug, not a model property.
inline double lyapunov_coefficient(const ValidatedModel& model) {
    const double tau = model.tau();
    const DerivsAtZero& d = model.d0;
    const double c0 = critical_speed(model);
    const double om0 = hopf_frequency(model);
    const double kappa = 1.0 / (1.0 - c0 * c0 * tau);

    const double a0 = (kappa / 16.0) *
                      (c0 * tau * d.gppp + d.fppp -
                       (1.0 / om0) * (c0 * tau * d.gpp + d.fpp) * (d.gpp + c0 * d.fpp));

    // Full template. F is linear in V and G_V is constant, so every V-partial
    // vanishes; assembling them anyway guards the formula above.
    const double F_UU = c0 * tau * d.gpp + d.fpp;
    const double F_UUU = c0 * tau * d.gppp + d.fppp;
    const double F_UV = 0.0, F_VV = 0.0, F_UVV = 0.0;
    const double G_UU = d.gpp + c0 * d.fpp;
    const double G_UV = 0.0, G_VV = 0.0, G_UUV = 0.0, G_VVV = 0.0;
    const double a0_full =
        kappa * ((F_UUU + F_UVV + G_UUV + G_VVV) / 16.0 +
                 ((F_UU + F_VV) * F_UV - (G_UU + G_VV) * G_UV - F_UU * G_UU + F_VV * G_VV) /
                     (16.0 * om0));
    if (std::abs(a0 - a0_full) > 1e-10 * std::max(1.0, std::abs(a0)))
        throw EvaluationError("Lyapunov coefficient cross-check failed");

    if (std::abs(a0) <= 1e-12) throw DegenerateHopf(a0);
    return a0;
}

inline EquilibriumEigen equilibrium_eigenvalues(const ValidatedModel& model, double c) {
    const double tau = model.tau();
    if (!(1.0 - c * c * tau > 0.0)) throw CharacteristicSpeed(c, tau);
    const DerivsAtZero& d = model.d0;
    const double alpha = 0.5 * (d.fp + c * (tau * d.gp - 1.0));
    const double b = d.fp + c * tau * d.gp - c; // trace of the unscaled linearization
    const double disc = b * b - 4.0 * (1.0 - c * c * tau) * d.gp;
    EquilibriumEigen e;
    e.c = c;
    e.alpha = alpha;
    if (disc < 0.0) {
        e.beta = 0.5 * std::sqrt(-disc);
        e.zeta_plus = {alpha, e.beta};
        e.zeta_minus = {alpha, -e.beta};
    } else {
        e.beta = 0.0;
        const double r = 0.5 * std::sqrt(disc);
        e.zeta_plus = {alpha + r, 0.0};
        e.zeta_minus = {alpha - r, 0.0};
    }
    return e;
}

/// Assembles the bifurcation summary. Side and criticality are pure functions
/// of sign(a0) since d0 < 0 for every admissible tau.
inline HopfData hopf_summary(const ValidatedModel& model) {
    HopfData h;
    h.c0 = critical_speed(model);
    h.omega0 = hopf_frequency(model);
    h.a0 = lyapunov_coefficient(model);
    h.d0 = transversality(model);
    h.T0 = 2.0 * std::numbers::pi / h.omega0;
    h.side = h.a0 > 0.0 ? BifSide::above_c0 : BifSide::below_c0;
    h.criticality = h.a0 > 0.0 ? Criticality::subcritical : Criticality::supercritical;
    return h;
}

} // namespace hypwave
