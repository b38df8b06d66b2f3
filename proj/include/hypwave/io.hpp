#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypwave/errors.hpp"
#include "hypwave/hopf.hpp"
#include "hypwave/model.hpp"
#include "hypwave/orbit.hpp"
#include "hypwave/spectrum.hpp"
#include "hypwave/version.hpp"

namespace hypwave::io {

using json = nlohmann::ordered_json;

/// Shortest round-trip decimal (<= 17 significant digits).
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Model block: {"name", "tau", "delta", "f_poly", "g_poly"}.
/// "burgers-fisher" ignores the polynomial fields.
inline ModelSpec model_from_json(const json& j) {
    const std::string name = j.value("name", "");
    const double tau = j.value("tau", 0.0);
    const double delta = j.value("delta", 0.0);
    if (name == "burgers-fisher") {
        ModelSpec spec = builtin_model(name, tau);
        spec.delta = delta;
        return spec;
    }
    if (j.contains("f_poly") && j.contains("g_poly")) {
        return polynomial_model(name.empty() ? "polynomial" : name,
                                j.at("f_poly").get<std::vector<double>>(),
                                j.at("g_poly").get<std::vector<double>>(), tau, delta);
    }
    throw UnknownModel(name);
}

inline json model_to_json(const ModelSpec& spec) {
    json j;
    j["name"] = spec.name;
    j["tau"] = spec.tau;
    j["delta"] = spec.delta;
    if (!spec.f_poly.empty()) j["f_poly"] = spec.f_poly;
    if (!spec.g_poly.empty()) j["g_poly"] = spec.g_poly;
    return j;
}

inline json hopf_to_json(const ValidatedModel& model, const HopfData& h) {
    json j;
    j["c0"] = h.c0;
    j["omega0"] = h.omega0;
    j["a0"] = h.a0;
    j["d0"] = h.d0;
    j["T0"] = h.T0;
    j["side"] = to_string(h.side);
    j["criticality"] = to_string(h.criticality);
    j["tau"] = model.tau();
    j["tau_max"] = model.tau_max;
    j["tau_one"] = model.tau_one;
    j["tau_bar"] = model.tau_bar;
    return j;
}

inline json orbit_to_json(const PeriodicOrbit& orbit, const ModelSpec& spec) {
    json j;
    j["epsilon"] = orbit.epsilon;
    j["tau"] = orbit.tau;
    j["speed"] = orbit.speed;
    j["period"] = orbit.period;
    j["closure_residual"] = orbit.closure_residual;
    j["model"] = model_to_json(spec);
    json samples = json::array();
    for (const PhaseState& s : orbit.samples) samples.push_back(json::array({s.U, s.V}));
    j["samples"] = samples;
    return j;
}

/// Rebuilds a PeriodicOrbit (and its interpolant) from the orbit JSON file.
inline PeriodicOrbit orbit_from_json(const json& j, const ModelSpec& spec) {
    PeriodicOrbit orbit;
    orbit.epsilon = j.at("epsilon").get<double>();
    orbit.tau = j.at("tau").get<double>();
    orbit.speed = j.at("speed").get<double>();
    orbit.period = j.at("period").get<double>();
    orbit.closure_residual = j.at("closure_residual").get<double>();
    const auto& samples = j.at("samples");
    const std::size_t n = samples.size();
    if (!fourier::is_power_of_two(n) || n < 64)
        throw EvaluationError("orbit file: sample count must be a power of two >= 64");
    orbit.samples.resize(n);
    std::vector<double> us(n), vs(n);
    const double Vs = spec.f(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        us[k] = samples[k][0].get<double>();
        vs[k] = samples[k][1].get<double>();
        orbit.samples[k] = {us[k], vs[k]};
        orbit.amplitude_u = std::max(orbit.amplitude_u, std::abs(us[k]));
        orbit.amplitude_v = std::max(orbit.amplitude_v, std::abs(vs[k] - Vs));
    }
    orbit.u_interp = fourier::TrigInterp(us, orbit.period);
    orbit.v_interp = fourier::TrigInterp(vs, orbit.period);
    return orbit;
}

inline std::string orbit_to_csv(const PeriodicOrbit& orbit) {
    std::ostringstream out;
    out << "xi,U,V\n";
    const std::size_t n = orbit.samples.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = orbit.period * double(k) / double(n);
        out << format_double(xi) << ',' << format_double(orbit.samples[k].U) << ','
            << format_double(orbit.samples[k].V) << '\n';
    }
    return out.str();
}

inline std::string spectrum_to_csv(const SpectrumCurve& curve) {
    std::ostringstream out;
    out << "theta,re_lambda_hat,im_lambda_hat,re_lambda,im_lambda,residual\n";
    for (const SpectrumPoint& p : curve.points) {
        out << format_double(p.theta) << ',' << format_double(p.lambda_hat.real()) << ','
            << format_double(p.lambda_hat.imag()) << ',' << format_double(p.lambda.real()) << ','
            << format_double(p.lambda.imag()) << ',' << format_double(p.residual) << '\n';
    }
    return out.str();
}

inline json report_to_json(const InstabilityReport& rep, double period) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    if (rep.witness) {
        json w;
        w["theta"] = rep.witness->theta;
        w["re_lambda_hat"] = rep.witness->lambda_hat.real();
        w["im_lambda_hat"] = rep.witness->lambda_hat.imag();
        w["re_lambda"] = rep.witness->re_lambda;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    json e;
    e["evans_residual"] = rep.evidence.evans_residual;
    e["collocation_distance"] = rep.evidence.collocation_distance;
    e["root_count"] = rep.evidence.root_count;
    e["window_halfwidth"] = rep.evidence.window_halfwidth;
    j["evidence"] = e;
    j["period"] = period;
    j["tool_version"] = kVersion;
    json tol;
    tol["unstable_re_lambda_hat"] = 1e-6;
    tol["evans_residual"] = 1e-8;
    tol["collocation_distance"] = 1e-5;
    tol["oracle_disagreement"] = 1e-4;
    j["tolerances"] = tol;
    return j;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EvaluationError("cannot open '" + path + "' for writing");
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EvaluationError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace hypwave::io
