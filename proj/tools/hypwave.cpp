// hypwave: Hopf bifurcation data, periodic traveling waves, and Floquet/Evans
// spectral instability certification for the hyperbolic advection-reaction
// model with Cattaneo-Maxwell flux.
//
// Exit codes: 0 ok (waves certified unstable where applicable),
//             2 hypothesis violation / tau out of range,
//             3 degenerate Hopf (a0 = 0),
//             4 no periodic orbit found,
//             5 no unstable root certified,
//             6 Evans/collocation oracle disagreement,
//             1 anything else (I/O, bad arguments).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hypwave/hypwave.hpp"

namespace {

using hypwave::io::json;

struct CommonArgs {
    std::string model_name;
    std::string config_path;
    double tau = 0.2;
    double delta = 0.0;
    std::string epsilon_list = "0.01";
    int theta_grid = 33;
    int samples = 512;
    std::string window_spec;
    std::string out_dir = ".";
    std::string json_path;
    std::string orbit_path;
    double orbit_tol = 1e-12;
};

std::vector<double> parse_epsilons(const std::string& list) {
    std::vector<double> out;
    std::string cur;
    for (char ch : list + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(std::stod(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    return out;
}

// Run configuration file: either a bare model block, or a full run config
// with a "model" sub-block plus optional epsilon / theta_grid / samples /
// window / out / json / tolerances fields. Command-line flags take precedence.
void apply_config(const CLI::App* cmd, CommonArgs& args) {
    if (args.config_path.empty()) return;
    const json cfg = json::parse(hypwave::io::read_file(args.config_path));
    const bool nested = cfg.contains("model");
    if (!nested) return; // bare model block; handled by load_model
    auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
    if (cfg.contains("epsilon") && unset("--epsilon")) {
        if (cfg["epsilon"].is_array()) {
            std::string list;
            for (const auto& e : cfg["epsilon"])
                list += (list.empty() ? "" : ",") + hypwave::io::format_double(e.get<double>());
            args.epsilon_list = list;
        } else {
            args.epsilon_list = hypwave::io::format_double(cfg["epsilon"].get<double>());
        }
    }
    if (cfg.contains("theta_grid") && unset("--theta-grid"))
        args.theta_grid = cfg["theta_grid"].get<int>();
    if (cfg.contains("samples") && unset("--samples")) args.samples = cfg["samples"].get<int>();
    if (cfg.contains("window") && unset("--window")) {
        std::string w;
        for (const auto& v : cfg["window"])
            w += (w.empty() ? "" : ",") + hypwave::io::format_double(v.get<double>());
        args.window_spec = w;
    }
    if (cfg.contains("out") && unset("--out")) args.out_dir = cfg["out"].get<std::string>();
    if (cfg.contains("json") && unset("--json")) args.json_path = cfg["json"].get<std::string>();
    if (cfg.contains("tolerances") && cfg["tolerances"].contains("orbit_tol"))
        args.orbit_tol = cfg["tolerances"]["orbit_tol"].get<double>();
}

hypwave::ModelSpec load_model(const CommonArgs& args) {
    if (!args.config_path.empty()) {
        json cfg = json::parse(hypwave::io::read_file(args.config_path));
        return hypwave::io::model_from_json(cfg.contains("model") ? cfg["model"] : cfg);
    }
    if (args.model_name == "burgers-fisher") {
        auto spec = hypwave::builtin_model(args.model_name, args.tau);
        spec.delta = args.delta;
        return spec;
    }
    throw hypwave::UnknownModel(args.model_name.empty() ? "<none>" : args.model_name);
}

std::optional<hypwave::Window> parse_window(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    double v[4];
    if (std::sscanf(spec.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4)
        throw hypwave::EvaluationError("bad --window (expected r0,r1,i0,i1)");
    return hypwave::Window{v[0], v[1], v[2], v[3]};
}

std::string tag(double v) {
    std::string s = hypwave::io::format_double(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

unsigned worker_count() {
    if (const char* env = std::getenv("HYPWAVE_THREADS")) {
        const long n = std::atol(env);
        if (n >= 1) return unsigned(n);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// ---------------------------------------------------------------------------

int cmd_hopf(const CommonArgs& args) {
    const auto spec = load_model(args);
    const auto model = hypwave::validate(spec);
    const auto hopf = hypwave::hopf_summary(model);
    const json j = hypwave::io::hopf_to_json(model, hopf);
    std::cout << j.dump(2) << "\n";
    if (!args.json_path.empty()) hypwave::io::write_file(args.json_path, j.dump(2) + "\n");
    return 0;
}

int cmd_orbit(const CommonArgs& args) {
    const auto spec = load_model(args);
    const auto model = hypwave::validate(spec);
    const auto hopf = hypwave::hopf_summary(model);
    const auto epsilons = parse_epsilons(args.epsilon_list);
    std::printf("%-10s %-14s %-14s %-14s %-12s %-12s\n", "epsilon", "period", "amplitude_u",
                "amplitude_v", "closure", "margin");
    hypwave::OrbitOptions oopts;
    oopts.tol = args.orbit_tol;
    for (double eps : epsilons) {
        const auto orbit =
            hypwave::find_periodic_orbit(model, hopf, eps, std::size_t(args.samples), oopts);
        const auto diag = hypwave::orbit_diagnostics(orbit, hopf);
        std::printf("%-10g %-14.10f %-14.8f %-14.8f %-12.3e %-12.6f\n", eps, orbit.period,
                    orbit.amplitude_u, orbit.amplitude_v, diag.closure_residual,
                    diag.subchar_margin);
        const std::string base = args.out_dir + "/orbit-" + spec.name + "-tau" + tag(spec.tau) +
                                 "-eps" + tag(eps);
        hypwave::io::write_file(base + ".json",
                                hypwave::io::orbit_to_json(orbit, spec).dump(2) + "\n");
        hypwave::io::write_file(base + ".csv", hypwave::io::orbit_to_csv(orbit));
    }
    return 0;
}

int cmd_spectrum(const CommonArgs& args) {
    hypwave::ModelSpec spec;
    hypwave::PeriodicOrbit orbit;
    if (!args.orbit_path.empty()) {
        json j = json::parse(hypwave::io::read_file(args.orbit_path));
        spec = args.model_name.empty() && args.config_path.empty()
                   ? hypwave::io::model_from_json(j.at("model"))
                   : load_model(args);
        spec.tau = j.at("tau").get<double>();
        orbit = hypwave::io::orbit_from_json(j, spec);
    } else {
        spec = load_model(args);
        const auto model = hypwave::validate(spec);
        const auto hopf = hypwave::hopf_summary(model);
        const auto epsilons = parse_epsilons(args.epsilon_list);
        hypwave::OrbitOptions oopts;
        oopts.tol = args.orbit_tol;
        orbit = hypwave::find_periodic_orbit(model, hopf, epsilons.at(0),
                                             std::size_t(args.samples), oopts);
    }
    const auto model = hypwave::validate(spec);
    const auto hopf = hypwave::hopf_summary(model);

    hypwave::VerdictOptions vopts;
    vopts.window = parse_window(args.window_spec);
    const auto report = hypwave::instability_verdict(orbit, model, hopf, vopts);

    // Trace the spectral curve through the witness over a symmetric theta grid.
    hypwave::SpectrumCurve curve;
    if (report.witness) {
        const auto co = hypwave::build_coefficients(orbit, model, hopf, 512);
        const int half = std::max(1, args.theta_grid / 2);
        const double theta_max = 0.5;
        std::vector<double> up{0.0}, down{0.0};
        for (int k = 1; k <= half; ++k) {
            up.push_back(theta_max * double(k) / double(half));
            down.push_back(-theta_max * double(k) / double(half));
        }
        const auto c_up = hypwave::trace_curve(report.witness->lambda_hat, up, co);
        const auto c_down = hypwave::trace_curve(report.witness->lambda_hat, down, co);
        curve.points = c_down.points;
        for (const auto& p : c_up.points)
            if (p.theta > 0.0) curve.points.push_back(p);
        std::sort(curve.points.begin(), curve.points.end(),
                  [](const auto& a, const auto& b) { return a.theta < b.theta; });
    }

    const std::string base = args.out_dir + "/spectrum-" + spec.name + "-tau" + tag(spec.tau) +
                             "-eps" + tag(orbit.epsilon);
    hypwave::io::write_file(base + ".csv", hypwave::io::spectrum_to_csv(curve));
    const json rj = hypwave::io::report_to_json(report, orbit.period);
    hypwave::io::write_file(!args.json_path.empty() ? args.json_path : base + ".json",
                            rj.dump(2) + "\n");
    std::cout << rj.dump(2) << "\n";
    return report.verdict == hypwave::Verdict::unstable ? 0 : 5;
}

int cmd_verify(const CommonArgs& args) {
    const auto spec = load_model(args);
    const auto model = hypwave::validate(spec);
    const auto hopf = hypwave::hopf_summary(model);
    const auto epsilons = parse_epsilons(args.epsilon_list);

    struct RunResult {
        hypwave::PeriodicOrbit orbit;
        hypwave::InstabilityReport report;
        double wall_seconds;
    };

    std::counting_semaphore<64> slots(std::min<unsigned>(worker_count(), 64));
    std::vector<std::future<RunResult>> futures;
    for (double eps : epsilons) {
        futures.push_back(std::async(std::launch::async, [&, eps] {
            slots.acquire();
            const auto t0 = std::chrono::steady_clock::now();
            RunResult r;
            try {
                hypwave::OrbitOptions oopts;
                oopts.tol = args.orbit_tol;
                r.orbit = hypwave::find_periodic_orbit(model, hopf, eps, std::size_t(args.samples),
                                                       oopts);
                r.report = hypwave::instability_verdict(r.orbit, model, hopf);
            } catch (...) {
                slots.release();
                throw;
            }
            r.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            slots.release();
            return r;
        }));
    }

    json out;
    out["model"] = hypwave::io::model_to_json(spec);
    out["hopf"] = hypwave::io::hopf_to_json(model, hopf);
    json runs = json::array();
    bool all_unstable = true;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        const RunResult r = futures[i].get();
        const auto diag = hypwave::orbit_diagnostics(r.orbit, hopf);
        const bool ok = r.report.verdict == hypwave::Verdict::unstable;
        all_unstable = all_unstable && ok;
        std::printf(
            "verify model=%s tau=%s epsilon=%s verdict=%s re_lambda_hat=%s residual=%.3e "
            "oracle_dist=%.3e roots=%d period=%s closure=%.3e wall=%.2fs\n",
            spec.name.c_str(), hypwave::io::format_double(spec.tau).c_str(),
            hypwave::io::format_double(epsilons[i]).c_str(), to_string(r.report.verdict),
            hypwave::io::format_double(r.report.witness ? r.report.witness->lambda_hat.real() : 0.0)
                .c_str(),
            r.report.evidence.evans_residual, r.report.evidence.collocation_distance,
            r.report.evidence.root_count, hypwave::io::format_double(r.orbit.period).c_str(),
            r.orbit.closure_residual, r.wall_seconds);
        json run;
        run["epsilon"] = epsilons[i];
        run["orbit"] = {{"speed", r.orbit.speed},
                        {"period", r.orbit.period},
                        {"amplitude_u", r.orbit.amplitude_u},
                        {"amplitude_v", r.orbit.amplitude_v},
                        {"closure_residual", r.orbit.closure_residual},
                        {"period_slope", diag.period_slope},
                        {"amplitude_u_scaled", diag.amplitude_u_scaled},
                        {"amplitude_v_scaled", diag.amplitude_v_scaled},
                        {"subchar_margin", diag.subchar_margin}};
        run["report"] = hypwave::io::report_to_json(r.report, r.orbit.period);
        runs.push_back(run);
    }
    out["runs"] = runs;
    out["tool_version"] = hypwave::kVersion;
    if (!args.json_path.empty()) hypwave::io::write_file(args.json_path, out.dump(2) + "\n");
    std::printf("verify: %zu wave(s), %s\n", futures.size(),
                all_unstable ? "all certified unstable" : "certification incomplete");
    return all_unstable ? 0 : 5;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--model", args.model_name, "built-in model name (burgers-fisher)");
    cmd->add_option("--config", args.config_path, "model configuration JSON file");
    cmd->add_option("--tau", args.tau, "relaxation time");
    cmd->add_option("--delta", args.delta, "left extent of the g<0 interval (default 0)");
    cmd->add_option("--epsilon", args.epsilon_list, "epsilon or comma-separated list");
    cmd->add_option("--theta-grid", args.theta_grid, "Bloch-parameter grid size");
    cmd->add_option("--samples", args.samples, "profile samples per period (power of two)");
    cmd->add_option("--window", args.window_spec, "root-count window r0,r1,i0,i1");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--json", args.json_path, "write the JSON report to this path");
    cmd->add_option("--orbit", args.orbit_path, "read the orbit from this JSON file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic traveling waves and their Floquet/Evans spectra"};
    app.require_subcommand(1);
    CommonArgs args;
    auto* hopf = app.add_subcommand("hopf", "Hopf bifurcation data and tau thresholds");
    auto* orbit = app.add_subcommand("orbit", "compute periodic wave profiles");
    auto* spectrum = app.add_subcommand("spectrum", "Evans/Bloch spectrum and verdict");
    auto* verify = app.add_subcommand("verify", "full pipeline: validate, orbit, certify");
    for (auto* cmd : {hopf, orbit, spectrum, verify}) add_common(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (auto* cmd : {hopf, orbit, spectrum, verify})
            if (cmd->parsed()) apply_config(cmd, args);
        if (hopf->parsed()) return cmd_hopf(args);
        if (orbit->parsed()) return cmd_orbit(args);
        if (spectrum->parsed()) return cmd_spectrum(args);
        if (verify->parsed()) return cmd_verify(args);
    } catch (const hypwave::HypothesisViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hypwave::TauOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hypwave::CharacteristicSpeed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hypwave::DegenerateHopf& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const hypwave::NoOrbitFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const hypwave::SubcharacteristicViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const hypwave::OracleDisagreement& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
