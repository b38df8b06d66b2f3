#pragma once

#include <stdexcept>
#include <string>

namespace hypwave {

/// Base class for every failure the library reports deliberately.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownModel : Error {
    explicit UnknownModel(const std::string& name)
        : Error("unknown model '" + name + "'") {}
};

struct EvaluationError : Error {
    explicit EvaluationError(const std::string& what) : Error(what) {}
};

/// One of the logistic-source hypotheses failed; `condition` names it.
struct HypothesisViolation : Error {
    std::string condition;
    explicit HypothesisViolation(const std::string& cond)
        : Error("hypothesis violation: " + cond), condition(cond) {}
};

struct TauOutOfRange : Error {
    double tau;
    double tau_bar;
    TauOutOfRange(double tau_, double tau_bar_)
        : Error("tau = " + std::to_string(tau_) + " outside admissible range (0, " +
                std::to_string(tau_bar_) + ")"),
          tau(tau_), tau_bar(tau_bar_) {}
};

/// c^2 tau >= 1: the traveling-wave system is not reducible to explicit form.
struct CharacteristicSpeed : Error {
    double c;
    double tau;
    CharacteristicSpeed(double c_, double tau_)
        : Error("speed c = " + std::to_string(c_) + " is not subcharacteristic for tau = " +
                std::to_string(tau_)),
          c(c_), tau(tau_) {}
};

struct DegenerateHopf : Error {
    explicit DegenerateHopf(double a0)
        : Error("first Lyapunov coefficient vanishes (a0 = " + std::to_string(a0) +
                "); bifurcation is degenerate") {}
};

struct StepSizeUnderflow : Error {
    explicit StepSizeUnderflow(double t)
        : Error("step size underflow at t = " + std::to_string(t)) {}
};

struct NonFiniteState : Error {
    explicit NonFiniteState(double t)
        : Error("non-finite state encountered at t = " + std::to_string(t)) {}
};

struct NoOrbitFound : Error {
    explicit NoOrbitFound(const std::string& why) : Error("no periodic orbit found: " + why) {}
};

struct SubcharacteristicViolated : Error {
    SubcharacteristicViolated(double c, double tau)
        : Error("wave speed c = " + std::to_string(c) + " violates c^2 tau < 1 (tau = " +
                std::to_string(tau) + ")") {}
};

struct ContourTooClose : Error {
    explicit ContourTooClose(const std::string& where)
        : Error("root too close to counting contour: " + where) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& what) : Error(what) {}
};

struct BranchLost : Error {
    explicit BranchLost(const std::string& what) : Error(what) {}
};

/// The Evans root and the collocation spectrum disagree beyond tolerance.
/// Signals a numerical fault; never downgraded to a verdict.
struct OracleDisagreement : Error {
    double distance;
    explicit OracleDisagreement(double dist)
        : Error("Evans root and collocation eigenvalue differ by " + std::to_string(dist)),
          distance(dist) {}
};

} // namespace hypwave
