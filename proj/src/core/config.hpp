#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "core/classifier.hpp"
#include "core/integrator.hpp"
#include "core/montecarlo.hpp"
#include "core/rootsys.hpp"

// JSON grammars: potentials {"kind":"zero"|"log"|"shifted_log"|
// "trig_log_sin"|"hyp_log_sinh"|"scaled_arg", ...}, models {"kind":
// "rost_vares"|"wishart"|"dunkl"|"trig"|"hyperbolic"|"custom", ...} and run
// configs {"model":..., "sim":..., "ensemble":...}.  Parsing is strict:
// unknown kinds and missing required fields raise ErrorCode::Parse.

namespace chamber {

inline constexpr const char* kFormatVersionKey = "format";
inline constexpr const char* kTrajectoryFormat = "chamber-trajectory/1";
inline constexpr const char* kSimulateFormat = "chamber-simulate/1";
inline constexpr const char* kEnsembleFormat = "chamber-ensemble/1";
inline constexpr const char* kClassifyFormat = "chamber-classify/1";
inline constexpr const char* kRootsFormat = "chamber-roots/1";

PotentialPtr parse_potential(const nlohmann::json& spec);
nlohmann::json potential_to_json(const BarrierPotential& p);

PolyhedralModel parse_model(const nlohmann::json& spec);
PolyhedralModel parse_model_string(const std::string& text);
// Resolved (custom-form) spec: reparsing builds an identical model.
nlohmann::json model_to_json(const PolyhedralModel& model);

SimConfig parse_sim_config(const nlohmann::json& spec, bool require_seed = true);
nlohmann::json sim_config_to_json(const SimConfig& config);

struct RunConfig {
    nlohmann::json model_spec;
    SimConfig sim;
    int64_t ensemble_n = 500;
};
RunConfig parse_run_config(const nlohmann::json& doc, bool require_seed = true);
RunConfig parse_run_config_string(const std::string& text, bool require_seed = true);

// Root-system input: {"family":..,"rank":..,"k":[..]} or explicit
// {"dimension":..,"roots":[[..],..],"k":[..],"witness":[..]?}.
RootSystem parse_root_system(const nlohmann::json& spec);
nlohmann::json validation_to_json(const RootSystem& rs, const ValidationReport& report);

nlohmann::json classify_to_json(const PolyhedralModel& model);
nlohmann::json ensemble_report_to_json(const EnsembleReport& report);
nlohmann::json trajectory_summary_to_json(const Trajectory& traj,
                                          const PolyhedralModel& model,
                                          const SimConfig& config);
std::string trajectory_to_csv(const Trajectory& traj, const PolyhedralModel& model,
                              const SimConfig& config, bool include_gaps);

}  // namespace chamber
