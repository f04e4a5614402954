#include "chamber/chamber.h"

#include <nlohmann/json.hpp>

#include <cstring>
#include <new>
#include <string>

#include "core/config.hpp"

// Opaque handle definitions.
struct chamber_model_s {
    chamber::PolyhedralModel model;
};

struct chamber_trajectory_s {
    chamber::Trajectory trajectory;
    chamber::SimConfig config;
    const chamber_model_s* model;  // owned by the caller, outlives us by contract
};

namespace {

thread_local std::string g_last_error;

chamber_status status_from(const chamber::Error& e) {
    g_last_error = e.what();
    switch (e.code()) {
        case chamber::ErrorCode::Parse:
            return CHAMBER_ERROR_PARSE;
        case chamber::ErrorCode::Indeterminate:
            return CHAMBER_ERROR_INDETERMINATE;
        case chamber::ErrorCode::Validation:
            return CHAMBER_ERROR_VALIDATION;
        case chamber::ErrorCode::InvalidArgument:
        case chamber::ErrorCode::Infeasible:
        case chamber::ErrorCode::EmptyIntersection:
        case chamber::ErrorCode::DomainEval:
            return CHAMBER_ERROR_INVALID_ARGUMENT;
        case chamber::ErrorCode::SolverFailure:
        case chamber::ErrorCode::Runtime:
            return CHAMBER_ERROR_RUNTIME;
    }
    return CHAMBER_ERROR_RUNTIME;
}

char* copy_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
chamber_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const chamber::Error& e) {
        return status_from(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CHAMBER_ERROR_RUNTIME;
    }
}

chamber_status invalid(const char* message) {
    g_last_error = message;
    return CHAMBER_ERROR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* chamber_version(void) { return CHAMBER_API_VERSION; }

const char* chamber_last_error(void) { return g_last_error.c_str(); }

void chamber_string_free(char* s) { delete[] s; }

chamber_status chamber_model_from_json(const char* json, chamber_model** out) {
    if (!json || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&]() {
        auto* handle =
            new chamber_model_s{chamber::parse_model_string(json)};
        *out = handle;
        return CHAMBER_OK;
    });
}

void chamber_model_free(chamber_model* model) { delete model; }

int chamber_model_dimension(const chamber_model* model) {
    return model ? model->model.dimension() : -1;
}

int chamber_model_num_faces(const chamber_model* model) {
    return model ? model->model.num_faces() : -1;
}

chamber_status chamber_model_to_json(const chamber_model* model, char** out) {
    if (!model || !out) return invalid("null argument");
    return guarded([&]() {
        *out = copy_string(chamber::model_to_json(model->model).dump(2));
        return *out ? CHAMBER_OK : CHAMBER_ERROR_RUNTIME;
    });
}

chamber_status chamber_classify_json(const chamber_model* model, char** out) {
    if (!model || !out) return invalid("null argument");
    return guarded([&]() {
        *out = copy_string(chamber::classify_to_json(model->model).dump(2));
        return *out ? CHAMBER_OK : CHAMBER_ERROR_RUNTIME;
    });
}

chamber_status chamber_validate_roots_json(const char* spec_json, char** out) {
    if (!spec_json || !out) return invalid("null argument");
    return guarded([&]() {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(spec_json);
        } catch (const nlohmann::json::exception& e) {
            throw chamber::Error(chamber::ErrorCode::Parse,
                                 std::string("invalid JSON: ") + e.what());
        }
        const chamber::RootSystem rs = chamber::parse_root_system(doc);
        const chamber::ValidationReport report = chamber::validate(rs);
        *out = copy_string(chamber::validation_to_json(rs, report).dump(2));
        return *out ? CHAMBER_OK : CHAMBER_ERROR_RUNTIME;
    });
}

chamber_status chamber_simulate_json(const chamber_model* model,
                                     const char* sim_json,
                                     chamber_trajectory** out) {
    if (!model || !sim_json || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&]() {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(sim_json);
        } catch (const nlohmann::json::exception& e) {
            throw chamber::Error(chamber::ErrorCode::Parse,
                                 std::string("invalid JSON: ") + e.what());
        }
        const chamber::SimConfig config = chamber::parse_sim_config(doc);
        auto* handle = new chamber_trajectory_s{
            chamber::simulate(model->model, config), config, model};
        *out = handle;
        return CHAMBER_OK;
    });
}

void chamber_trajectory_free(chamber_trajectory* trajectory) {
    delete trajectory;
}

chamber_status chamber_trajectory_to_csv(const chamber_trajectory* trajectory,
                                         int include_gaps, char** out) {
    if (!trajectory || !out) return invalid("null argument");
    return guarded([&]() {
        *out = copy_string(chamber::trajectory_to_csv(
            trajectory->trajectory, trajectory->model->model,
            trajectory->config, include_gaps != 0));
        return *out ? CHAMBER_OK : CHAMBER_ERROR_RUNTIME;
    });
}

chamber_status chamber_trajectory_summary_json(
    const chamber_trajectory* trajectory, char** out) {
    if (!trajectory || !out) return invalid("null argument");
    return guarded([&]() {
        *out = copy_string(
            chamber::trajectory_summary_to_json(trajectory->trajectory,
                                                trajectory->model->model,
                                                trajectory->config)
                .dump(2));
        return *out ? CHAMBER_OK : CHAMBER_ERROR_RUNTIME;
    });
}

chamber_status chamber_ensemble_json(const chamber_model* model,
                                     const char* sim_json, int64_t n,
                                     int threads, char** out) {
    if (!model || !sim_json || !out) return invalid("null argument");
    return guarded([&]() {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(sim_json);
        } catch (const nlohmann::json::exception& e) {
            throw chamber::Error(chamber::ErrorCode::Parse,
                                 std::string("invalid JSON: ") + e.what());
        }
        const chamber::SimConfig config = chamber::parse_sim_config(doc);
        const chamber::EnsembleReport report =
            chamber::run_ensemble(model->model, config, n, threads);
        *out = copy_string(chamber::ensemble_report_to_json(report).dump(2));
        return *out ? CHAMBER_OK : CHAMBER_ERROR_RUNTIME;
    });
}

}  // extern "C"
