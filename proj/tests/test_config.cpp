#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "core/config.hpp"

using namespace chamber;
using nlohmann::json;

TEST_CASE("potential grammar round trips") {
    for (const char* text : {
             R"({"kind":"zero"})",
             R"({"kind":"log","gamma":0.5})",
             R"({"kind":"shifted_log","gamma":0.8,"c":0.25})",
             R"({"kind":"trig_log_sin","gamma":0.4})",
             R"({"kind":"hyp_log_sinh","gamma":1.25})",
             R"({"kind":"scaled_arg","scale":1.5,"inner":{"kind":"log","gamma":0.3}})",
         }) {
        const json spec = json::parse(text);
        const PotentialPtr p = parse_potential(spec);
        const json back = potential_to_json(*p);
        CHECK(back == spec);
    }
    CHECK_THROWS_AS(parse_potential(json::parse(R"({"kind":"exp"})")), Error);
    CHECK_THROWS_AS(parse_potential(json::parse(R"({"kind":"log"})")), Error);
}

TEST_CASE("every zoo kind parses and the resolved form reparses identically") {
    for (const char* text : {
             R"({"kind":"rost_vares","n":3,"phi":{"kind":"log","gamma":0.2}})",
             R"({"kind":"wishart","n":2,"delta":3.0})",
             R"({"kind":"dunkl","family":"A","rank":2,"k":[0.75]})",
             R"({"kind":"dunkl","family":"B","rank":2,"k":[0.6,1.0]})",
             R"({"kind":"dunkl","family":"I2","rank":5,"k":0.8})",
             R"({"kind":"trig","n":3,"gamma":0.5})",
             R"({"kind":"hyperbolic","n":2,"gamma":0.7})",
         }) {
        const PolyhedralModel model = parse_model(json::parse(text));
        const json resolved = model_to_json(model);
        const PolyhedralModel again = parse_model(resolved);

        REQUIRE(again.num_faces() == model.num_faces());
        CHECK(again.dimension() == model.dimension());
        for (int i = 0; i < model.num_faces(); ++i) {
            const Face& a = model.domain().face(i);
            const Face& b = again.domain().face(i);
            CHECK((a.normal - b.normal).lpNorm<Eigen::Infinity>() <= 1e-15);
            CHECK(std::abs(a.offset - b.offset) <= 1e-15);
            CHECK(a.label == b.label);
        }
        CHECK((model.initial_point() - again.initial_point()).norm() <= 1e-15);
        // And the resolved form is a fixed point of serialization.
        CHECK(model_to_json(again) == resolved);
    }
}

TEST_CASE("custom model spec with monitored subsets") {
    const auto spec = json::parse(R"({
        "kind": "custom",
        "name": "orthant",
        "dimension": 2,
        "faces": [
            {"normal": [1, 0], "offset": 0, "potential": {"kind": "zero"}, "label": "x"},
            {"normal": [0, 1], "offset": 0, "potential": {"kind": "zero"}, "label": "y"}
        ],
        "initial": [1, 1],
        "monitored": [[0, 1]]
    })");
    const PolyhedralModel model = parse_model(spec);
    CHECK(model.name() == "orthant");
    REQUIRE(model.monitored_subsets().size() == 1);
    CHECK(model.monitored_subsets()[0].indices == std::vector<int>{0, 1});

    // Normalize-on-load for non-unit normals.
    auto scaled = spec;
    scaled["faces"][0]["normal"] = {2, 0};
    CHECK_THROWS_AS(parse_model(scaled), Error);
    scaled["normalize"] = true;
    const PolyhedralModel normalized = parse_model(scaled);
    CHECK(normalized.domain().face(0).normal[0] == doctest::Approx(1.0));
}

TEST_CASE("schema violations raise parse errors") {
    CHECK_THROWS_AS(parse_model_string("{not json"), Error);
    CHECK_THROWS_AS(parse_model(json::parse(R"({"kind":"nope"})")), Error);
    CHECK_THROWS_AS(parse_model(json::parse(R"({"kind":"wishart","n":2})")),
                    Error);
    CHECK_THROWS_AS(
        parse_model(json::parse(R"({"kind":"dunkl","family":"E","rank":8,"k":1})")),
        Error);
    try {
        parse_model(json::parse(R"({"kind":"rost_vares","n":3})"));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        CHECK(std::string(e.what()).find("phi") != std::string::npos);
    }
}

TEST_CASE("sim config: seed is mandatory, fields round trip") {
    const auto spec = json::parse(
        R"({"dt":1e-4,"horizon":2.5,"seed":42,"scheme":"projected",
            "hit_eps":1e-3,"edge_eps":1e-2,"escape_radius":50.0,
            "record_stride":5})");
    const SimConfig cfg = parse_sim_config(spec);
    CHECK(cfg.dt == 1e-4);
    CHECK(cfg.horizon == 2.5);
    CHECK(cfg.seed == 42);
    CHECK(cfg.scheme == Scheme::ProjectedEuler);
    CHECK(cfg.escape_radius == 50.0);
    const SimConfig back = parse_sim_config(sim_config_to_json(cfg));
    CHECK(back.dt == cfg.dt);
    CHECK(back.seed == cfg.seed);
    CHECK(back.escape_radius == cfg.escape_radius);

    CHECK_THROWS_AS(parse_sim_config(json::parse(R"({"dt":1e-3})")), Error);
    CHECK_THROWS_AS(
        parse_sim_config(json::parse(R"({"seed":1,"scheme":"magic"})")), Error);
    CHECK_THROWS_AS(parse_sim_config(json::parse(R"({"seed":1,"dt":0})")),
                    Error);
    // Null escape radius means unbounded.
    const SimConfig unbounded = parse_sim_config(
        json::parse(R"({"seed":1,"escape_radius":null})"));
    CHECK(std::isinf(unbounded.escape_radius));
}

TEST_CASE("run config bundles model, sim and ensemble sections") {
    const auto doc = json::parse(R"({
        "model": {"kind": "wishart", "n": 2, "delta": 3.0},
        "sim": {"dt": 1e-3, "horizon": 1.0, "seed": 9},
        "ensemble": {"n": 123}
    })");
    const RunConfig rc = parse_run_config(doc);
    CHECK(rc.ensemble_n == 123);
    CHECK(rc.sim.seed == 9);
    const PolyhedralModel model = parse_model(rc.model_spec);
    CHECK(model.num_faces() == 4);
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"sim":{"seed":1}})")),
                    Error);
}

TEST_CASE("root system specs: families and explicit roots") {
    const RootSystem b3 = parse_root_system(
        json::parse(R"({"family":"B","rank":3,"k":[0.5,0.9]})"));
    CHECK(b3.positive.size() == 9);
    CHECK(validate(b3).valid);

    // Explicit A2 copy.
    json explicit_spec;
    explicit_spec["dimension"] = 3;
    explicit_spec["k"] = 1.0;
    json roots = json::array();
    const auto a2 = standard_root_system(RootFamily::A, 2, {1.0});
    for (const Vector& r : a2.roots)
        roots.push_back({r[0], r[1], r[2]});
    explicit_spec["roots"] = roots;
    const RootSystem parsed = parse_root_system(explicit_spec);
    CHECK(parsed.positive.size() == 3);
    CHECK(validate(parsed).valid);

    // Tampered copy: drop one root.
    explicit_spec["roots"].erase(0);
    explicit_spec["k"] = 1.0;
    const RootSystem tampered = parse_root_system(explicit_spec);
    const auto report = validate(tampered);
    CHECK_FALSE(report.valid);
    CHECK_FALSE(report.failures.empty());
    const json rj = validation_to_json(tampered, report);
    CHECK(rj["valid"] == false);
}

TEST_CASE("classification report JSON carries one row per face") {
    const PolyhedralModel model = parse_model(
        json::parse(R"({"kind":"dunkl","family":"A","rank":2,"k":[0.7]})"));
    const json report = classify_to_json(model);
    CHECK(report["format"] == kClassifyFormat);
    REQUIRE(report["faces"].size() == 3);
    for (const auto& row : report["faces"]) {
        CHECK(row["class"] == "strong");
        CHECK(row["gamma_declared"] == doctest::Approx(0.7));
    }
    CHECK(report["indeterminate_count"] == 0);
}

TEST_CASE("trajectory CSV embeds config and accumulates local time") {
    const PolyhedralModel model = parse_model(json::parse(
        R"({"kind":"custom","dimension":1,
            "faces":[{"normal":[1],"offset":0,"potential":{"kind":"zero"},"label":"w"}],
            "initial":[0.2]})"));
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 0.05;
    cfg.seed = 11;
    const Trajectory traj = simulate(model, cfg);
    const std::string csv = trajectory_to_csv(traj, model, cfg, true);
    CHECK(csv.find("# chamber-trajectory/1") == 0);
    CHECK(csv.find("# config:") != std::string::npos);
    CHECK(csv.find("t,x_1,gap_1,L_1") != std::string::npos);
    // One line per record plus two comments and the header.
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == static_cast<int>(traj.records.size()) + 3);

    const json summary = trajectory_summary_to_json(traj, model, cfg);
    CHECK(summary["format"] == kSimulateFormat);
    CHECK(summary["termination"] == "horizon");
    CHECK(summary["steps"] == 50);
}

TEST_CASE("ensemble report JSON is self-describing") {
    const PolyhedralModel model = parse_model(
        json::parse(R"({"kind":"rost_vares","n":3,"phi":{"kind":"log","gamma":0.75}})"));
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.horizon = 0.2;
    cfg.seed = 21;
    const EnsembleReport report = run_ensemble(model, cfg, 20);
    const json doc = ensemble_report_to_json(report);
    CHECK(doc["format"] == kEnsembleFormat);
    CHECK(doc["n"] == 20);
    CHECK(doc["config"]["seed"] == 21);
    REQUIRE(doc["faces"].size() == 2);
    for (const auto& row : doc["faces"]) {
        CHECK(row.contains("hit_fraction"));
        CHECK(row.contains("verdict"));
        CHECK(row["class"] == "strong");
    }
    CHECK(doc.contains("wall_clock_seconds"));
    CHECK(doc["subsets"].size() == 1);  // consecutive-pair edge monitor
}
