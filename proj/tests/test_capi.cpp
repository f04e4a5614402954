#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstring>
#include <string>

#include "chamber/chamber.h"

using nlohmann::json;

namespace {

struct StringGuard {
    char* ptr = nullptr;
    ~StringGuard() { chamber_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

struct ModelGuard {
    chamber_model* ptr = nullptr;
    ~ModelGuard() { chamber_model_free(ptr); }
};

struct TrajectoryGuard {
    chamber_trajectory* ptr = nullptr;
    ~TrajectoryGuard() { chamber_trajectory_free(ptr); }
};

constexpr const char* kDunklA2 =
    R"({"kind":"dunkl","family":"A","rank":2,"k":[0.75]})";
constexpr const char* kSim =
    R"({"dt":1e-3,"horizon":0.2,"seed":77,"record_stride":10})";

}  // namespace

TEST_CASE("version and error strings are always available") {
    CHECK(std::strcmp(chamber_version(), CHAMBER_API_VERSION) == 0);
    CHECK(chamber_last_error() != nullptr);
}

TEST_CASE("model lifecycle and accessors") {
    ModelGuard model;
    REQUIRE(chamber_model_from_json(kDunklA2, &model.ptr) == CHAMBER_OK);
    CHECK(chamber_model_dimension(model.ptr) == 3);
    CHECK(chamber_model_num_faces(model.ptr) == 3);

    StringGuard spec;
    REQUIRE(chamber_model_to_json(model.ptr, &spec.ptr) == CHAMBER_OK);
    // The resolved spec reparses to an identical model through the C API.
    ModelGuard again;
    REQUIRE(chamber_model_from_json(spec.ptr, &again.ptr) == CHAMBER_OK);
    StringGuard spec2;
    REQUIRE(chamber_model_to_json(again.ptr, &spec2.ptr) == CHAMBER_OK);
    CHECK(spec.str() == spec2.str());
}

TEST_CASE("status codes and last_error for failing calls") {
    chamber_model* model = nullptr;
    CHECK(chamber_model_from_json("{broken", &model) == CHAMBER_ERROR_PARSE);
    CHECK(model == nullptr);
    CHECK(std::string(chamber_last_error()).find("JSON") != std::string::npos);

    CHECK(chamber_model_from_json(R"({"kind":"nope"})", &model) ==
          CHAMBER_ERROR_PARSE);
    CHECK(chamber_model_from_json(nullptr, &model) ==
          CHAMBER_ERROR_INVALID_ARGUMENT);
    // Infeasible custom domain surfaces as an invalid-argument status.
    CHECK(chamber_model_from_json(
              R"({"kind":"custom","dimension":1,
                  "faces":[{"normal":[1],"offset":0,"potential":{"kind":"zero"}},
                           {"normal":[-1],"offset":0,"potential":{"kind":"zero"}}],
                  "initial":[0.5]})",
              &model) == CHAMBER_ERROR_INVALID_ARGUMENT);
    CHECK(chamber_model_dimension(nullptr) == -1);
}

TEST_CASE("classification through the C boundary") {
    ModelGuard model;
    REQUIRE(chamber_model_from_json(kDunklA2, &model.ptr) == CHAMBER_OK);
    StringGuard report;
    REQUIRE(chamber_classify_json(model.ptr, &report.ptr) == CHAMBER_OK);
    const json doc = json::parse(report.str());
    CHECK(doc["faces"].size() == 3);
    for (const auto& row : doc["faces"]) CHECK(row["class"] == "strong");
}

TEST_CASE("root validation through the C boundary") {
    StringGuard ok;
    REQUIRE(chamber_validate_roots_json(R"({"family":"B","rank":3,"k":[1,2]})",
                                        &ok.ptr) == CHAMBER_OK);
    const json good = json::parse(ok.str());
    CHECK(good["valid"] == true);
    CHECK(good["num_positive"] == 9);

    // Tampered explicit roots: missing the negatives entirely.
    StringGuard bad;
    REQUIRE(chamber_validate_roots_json(
                R"({"dimension":2,"roots":[[1,0],[0,1]],"k":1.0})", &bad.ptr) ==
            CHAMBER_OK);
    CHECK(json::parse(bad.str())["valid"] == false);

    char* out = nullptr;
    CHECK(chamber_validate_roots_json("{oops", &out) == CHAMBER_ERROR_PARSE);
}

TEST_CASE("simulation and trajectory serialization through the C boundary") {
    ModelGuard model;
    REQUIRE(chamber_model_from_json(kDunklA2, &model.ptr) == CHAMBER_OK);

    TrajectoryGuard traj;
    REQUIRE(chamber_simulate_json(model.ptr, kSim, &traj.ptr) == CHAMBER_OK);

    StringGuard csv;
    REQUIRE(chamber_trajectory_to_csv(traj.ptr, 1, &csv.ptr) == CHAMBER_OK);
    CHECK(csv.str().rfind("# chamber-trajectory/1", 0) == 0);
    CHECK(csv.str().find("gap_1") != std::string::npos);

    StringGuard summary;
    REQUIRE(chamber_trajectory_summary_json(traj.ptr, &summary.ptr) ==
            CHAMBER_OK);
    const json doc = json::parse(summary.str());
    CHECK(doc["steps"] == 200);
    CHECK(doc["termination"] == "horizon");

    // Missing seed is a parse failure.
    chamber_trajectory* t2 = nullptr;
    CHECK(chamber_simulate_json(model.ptr, R"({"dt":1e-3})", &t2) ==
          CHAMBER_ERROR_PARSE);
}

TEST_CASE("ensemble through the C boundary") {
    ModelGuard model;
    REQUIRE(chamber_model_from_json(kDunklA2, &model.ptr) == CHAMBER_OK);
    StringGuard report;
    REQUIRE(chamber_ensemble_json(model.ptr, kSim, 10, 2, &report.ptr) ==
            CHAMBER_OK);
    const json doc = json::parse(report.str());
    CHECK(doc["n"] == 10);
    CHECK(doc["faces"].size() == 3);
    CHECK(chamber_ensemble_json(model.ptr, kSim, 0, 1, &report.ptr) ==
          CHAMBER_ERROR_INVALID_ARGUMENT);
}
