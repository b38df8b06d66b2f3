#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hypwave/hopf.hpp"
#include "hypwave/io.hpp"
#include "hypwave/orbit.hpp"

using namespace hypwave;
using hypwave::io::json;

TEST_CASE("doubles serialize as shortest round-trip decimals") {
    for (double v : {0.1, 1.0 / 3.0, 2.0 * std::numbers::pi, -1e-12, 0.0, 12345.678901234567}) {
        const std::string s = io::format_double(v);
        CHECK(std::stod(s) == v);
        CHECK(s.size() <= 24);
    }
}

TEST_CASE("model config parsing") {
    SUBCASE("burgers-fisher ignores polynomial fields") {
        const json j = {{"name", "burgers-fisher"}, {"tau", 0.2}, {"f_poly", {9.0}}, {"g_poly", {9.0}}};
        const auto spec = io::model_from_json(j);
        CHECK(spec.g(0.5) == doctest::Approx(0.25));
        CHECK(spec.tau == 0.2);
    }
    SUBCASE("polynomial coefficients are ascending-degree") {
        const json j = {{"name", "quad"},
                        {"tau", 0.2},
                        {"delta", 0.0},
                        {"f_poly", {0.0, 1.0, 0.5}},
                        {"g_poly", {0.0, 1.0, -1.0}}};
        const auto spec = io::model_from_json(j);
        CHECK(spec.f(1.0) == doctest::Approx(1.5));
        CHECK(derivs_at_zero(spec).fp == 1.0);
    }
    SUBCASE("unknown names are rejected") {
        const json j = {{"name", "mystery"}, {"tau", 0.2}};
        CHECK_THROWS_AS(io::model_from_json(j), UnknownModel);
    }
}

TEST_CASE("orbit files round-trip the sample arrays exactly") {
    const auto spec = builtin_model("burgers-fisher", 0.2);
    const auto model = validate(spec);
    const auto hopf = hopf_summary(model);
    const auto orbit = find_periodic_orbit(model, hopf, 0.01, 128);

    const json j = io::orbit_to_json(orbit, spec);
    const json parsed = json::parse(j.dump());
    const auto back = io::orbit_from_json(parsed, spec);

    REQUIRE(back.samples.size() == orbit.samples.size());
    for (std::size_t k = 0; k < orbit.samples.size(); ++k) {
        CHECK(back.samples[k].U == orbit.samples[k].U);
        CHECK(back.samples[k].V == orbit.samples[k].V);
    }
    CHECK(back.period == orbit.period);
    CHECK(back.speed == orbit.speed);
    CHECK(back.epsilon == orbit.epsilon);

    const std::string csv = io::orbit_to_csv(orbit);
    CHECK(csv.substr(0, 7) == "xi,U,V\n");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + long(orbit.samples.size()));
}

TEST_CASE("hopf and report JSON carry the documented fields") {
    const auto model = validate(builtin_model("burgers-fisher", 0.2));
    const auto hopf = hopf_summary(model);
    const json h = io::hopf_to_json(model, hopf);
    for (const char* key : {"c0", "omega0", "a0", "d0", "T0", "side", "criticality", "tau_bar"})
        CHECK(h.contains(key));
    CHECK(h["side"] == "above_c0");
    CHECK(h["criticality"] == "subcritical");

    InstabilityReport rep;
    rep.verdict = Verdict::unstable;
    rep.witness = InstabilityWitness{0.0, {6.6, 0.0}, 1.05};
    rep.evidence = {1e-12, 1e-9, 1, 0.5};
    const json r = io::report_to_json(rep, 6.3);
    CHECK(r["verdict"] == "unstable");
    CHECK(r["witness"]["re_lambda_hat"] == 6.6);
    CHECK(r["evidence"]["root_count"] == 1);
    CHECK(r.contains("tool_version"));
    CHECK(r.contains("tolerances"));
}
