#include "core/config.hpp"

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cmath>
#include <sstream>

namespace chamber {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) {
    throw Error(ErrorCode::Parse, msg);
}

const json& require(const json& doc, const char* key, const char* context) {
    const auto it = doc.find(key);
    if (it == doc.end())
        parse_fail(std::string(context) + ": missing required field '" + key + "'");
    return *it;
}

double require_number(const json& doc, const char* key, const char* context) {
    const json& v = require(doc, key, context);
    if (!v.is_number())
        parse_fail(std::string(context) + ": field '" + key + "' must be a number");
    return v.get<double>();
}

int require_int(const json& doc, const char* key, const char* context) {
    const json& v = require(doc, key, context);
    if (!v.is_number_integer())
        parse_fail(std::string(context) + ": field '" + key + "' must be an integer");
    return v.get<int>();
}

Vector parse_vector(const json& arr, const char* context) {
    if (!arr.is_array() || arr.empty())
        parse_fail(std::string(context) + ": expected a nonempty array");
    Vector v(static_cast<int>(arr.size()));
    for (size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            parse_fail(std::string(context) + ": array entries must be numbers");
        v[static_cast<int>(i)] = arr[i].get<double>();
    }
    return v;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

json maybe_finite(double v) {
    // JSON has no infinity; reports encode it as null.
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

PotentialPtr parse_potential(const json& spec) {
    if (!spec.is_object()) parse_fail("potential spec must be an object");
    if (!spec.value("hint", true)) {
        json inner = spec;
        inner.erase("hint");
        return std::make_shared<HintWithheld>(parse_potential(inner));
    }
    const std::string kind =
        require(spec, "kind", "potential").get<std::string>();
    if (kind == "zero") return std::make_shared<ZeroPotential>();
    if (kind == "log")
        return std::make_shared<LogBarrier>(require_number(spec, "gamma", "log"));
    if (kind == "shifted_log")
        return std::make_shared<ShiftedLog>(
            require_number(spec, "gamma", "shifted_log"),
            require_number(spec, "c", "shifted_log"));
    if (kind == "trig_log_sin")
        return std::make_shared<TrigLogSin>(
            require_number(spec, "gamma", "trig_log_sin"));
    if (kind == "hyp_log_sinh")
        return std::make_shared<HyperbolicLogSinh>(
            require_number(spec, "gamma", "hyp_log_sinh"));
    if (kind == "scaled_arg")
        return std::make_shared<ScaledArgument>(
            parse_potential(require(spec, "inner", "scaled_arg")),
            require_number(spec, "scale", "scaled_arg"));
    parse_fail("unknown potential kind: " + kind);
}

json potential_to_json(const BarrierPotential& p) {
    if (const auto* withheld = dynamic_cast<const HintWithheld*>(&p)) {
        json out = potential_to_json(*withheld->inner());
        out["hint"] = false;
        return out;
    }
    json out;
    out["kind"] = p.kind();
    for (const auto& [key, value] : p.params()) out[key] = value;
    if (const auto* scaled = dynamic_cast<const ScaledArgument*>(&p))
        out["inner"] = potential_to_json(*scaled->inner());
    return out;
}

namespace {

PolyhedralModel parse_custom_model(const json& spec) {
    const int dim = require_int(spec, "dimension", "custom model");
    const json& faces_json = require(spec, "faces", "custom model");
    if (!faces_json.is_array() || faces_json.empty())
        parse_fail("custom model: 'faces' must be a nonempty array");
    std::vector<CustomFaceSpec> faces;
    for (const json& fj : faces_json) {
        CustomFaceSpec f;
        f.normal = parse_vector(require(fj, "normal", "face"), "face normal");
        f.offset = fj.value("offset", 0.0);
        f.potential = parse_potential(require(fj, "potential", "face"));
        f.label = fj.value("label", std::string());
        faces.push_back(std::move(f));
    }
    Vector initial =
        parse_vector(require(spec, "initial", "custom model"), "initial point");
    std::vector<FaceSubset> monitored;
    if (spec.contains("monitored")) {
        for (const json& sub : spec["monitored"]) {
            if (!sub.is_array()) parse_fail("monitored entries must be arrays");
            std::vector<int> idx;
            for (const json& v : sub) idx.push_back(v.get<int>());
            monitored.emplace_back(std::move(idx));
        }
    }
    return build_custom(spec.value("name", std::string("custom")), dim,
                        std::move(faces), std::move(initial),
                        std::move(monitored), spec.value("normalize", false));
}

}  // namespace

PolyhedralModel parse_model(const json& spec) {
    if (!spec.is_object()) parse_fail("model spec must be an object");
    const std::string kind = require(spec, "kind", "model").get<std::string>();
    if (kind == "rost_vares")
        return build_rost_vares(require_int(spec, "n", "rost_vares"),
                                parse_potential(require(spec, "phi", "rost_vares")));
    if (kind == "wishart")
        return build_wishart_radii(require_int(spec, "n", "wishart"),
                                   require_number(spec, "delta", "wishart"));
    if (kind == "dunkl") {
        const std::string family =
            require(spec, "family", "dunkl").get<std::string>();
        const json& k = require(spec, "k", "dunkl");
        std::vector<double> kv;
        if (k.is_number())
            kv.push_back(k.get<double>());
        else if (k.is_array())
            for (const json& v : k) kv.push_back(v.get<double>());
        else
            parse_fail("dunkl: 'k' must be a number or an array");
        return dunkl_model(standard_root_system(
            parse_root_family(family), require_int(spec, "rank", "dunkl"), kv));
    }
    if (kind == "trig")
        return build_trigonometric(require_int(spec, "n", "trig"),
                                   require_number(spec, "gamma", "trig"));
    if (kind == "hyperbolic")
        return build_hyperbolic(require_int(spec, "n", "hyperbolic"),
                                require_number(spec, "gamma", "hyperbolic"));
    if (kind == "custom") return parse_custom_model(spec);
    parse_fail("unknown model kind: " + kind);
}

PolyhedralModel parse_model_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    return parse_model(doc);
}

json model_to_json(const PolyhedralModel& model) {
    json out;
    out["kind"] = "custom";
    out["name"] = model.name();
    out["dimension"] = model.dimension();
    json faces = json::array();
    for (int i = 0; i < model.num_faces(); ++i) {
        const Face& f = model.domain().face(i);
        json fj;
        fj["normal"] = vector_to_json(f.normal);
        fj["offset"] = f.offset;
        fj["potential"] = potential_to_json(model.potential_for_face(i));
        fj["label"] = f.label;
        faces.push_back(std::move(fj));
    }
    out["faces"] = std::move(faces);
    out["initial"] = vector_to_json(model.initial_point());
    json monitored = json::array();
    for (const FaceSubset& J : model.monitored_subsets())
        monitored.push_back(J.indices);
    out["monitored"] = std::move(monitored);
    return out;
}

SimConfig parse_sim_config(const json& spec, bool require_seed) {
    if (!spec.is_object()) parse_fail("sim config must be an object");
    SimConfig cfg;
    cfg.dt = spec.value("dt", cfg.dt);
    cfg.horizon = spec.value("horizon", cfg.horizon);
    if (spec.contains("seed")) {
        if (!spec["seed"].is_number_integer())
            parse_fail("sim config: 'seed' must be an integer");
        cfg.seed = spec["seed"].get<uint64_t>();
    } else if (require_seed) {
        parse_fail("sim config: explicit 'seed' is required");
    }
    const std::string scheme = spec.value("scheme", std::string("prox"));
    if (scheme == "prox")
        cfg.scheme = Scheme::ProxEuler;
    else if (scheme == "projected")
        cfg.scheme = Scheme::ProjectedEuler;
    else
        parse_fail("sim config: scheme must be 'prox' or 'projected'");
    cfg.hit_eps = spec.value("hit_eps", cfg.hit_eps);
    cfg.edge_eps = spec.value("edge_eps", cfg.edge_eps);
    if (spec.contains("escape_radius") && !spec["escape_radius"].is_null())
        cfg.escape_radius = spec["escape_radius"].get<double>();
    cfg.record_stride = spec.value("record_stride", cfg.record_stride);
    try {
        cfg.validate();
    } catch (const Error& e) {
        parse_fail(std::string("sim config: ") + e.what());
    }
    return cfg;
}

json sim_config_to_json(const SimConfig& config) {
    json out;
    out["dt"] = config.dt;
    out["horizon"] = config.horizon;
    out["seed"] = config.seed;
    out["scheme"] =
        config.scheme == Scheme::ProxEuler ? "prox" : "projected";
    out["hit_eps"] = config.hit_eps;
    out["edge_eps"] = config.edge_eps;
    out["escape_radius"] = maybe_finite(config.escape_radius);
    out["record_stride"] = config.record_stride;
    return out;
}

RunConfig parse_run_config(const json& doc, bool require_seed) {
    if (!doc.is_object()) parse_fail("run config must be an object");
    RunConfig rc;
    rc.model_spec = require(doc, "model", "run config");
    rc.sim = doc.contains("sim") ? parse_sim_config(doc["sim"], require_seed)
                                 : parse_sim_config(json::object(), require_seed);
    if (doc.contains("ensemble")) {
        const json& ens = doc["ensemble"];
        if (ens.contains("n")) rc.ensemble_n = ens["n"].get<int64_t>();
    }
    return rc;
}

RunConfig parse_run_config_string(const std::string& text, bool require_seed) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config(doc, require_seed);
}

RootSystem parse_root_system(const json& spec) {
    if (!spec.is_object()) parse_fail("root system spec must be an object");
    if (spec.contains("family")) {
        const json& k = require(spec, "k", "root system");
        std::vector<double> kv;
        if (k.is_number())
            kv.push_back(k.get<double>());
        else
            for (const json& v : k) kv.push_back(v.get<double>());
        return standard_root_system(
            parse_root_family(spec["family"].get<std::string>()),
            require_int(spec, "rank", "root system"), kv);
    }
    // Explicit roots.
    RootSystem rs;
    rs.ambient_dim = require_int(spec, "dimension", "root system");
    const json& roots = require(spec, "roots", "root system");
    if (!roots.is_array() || roots.empty())
        parse_fail("root system: 'roots' must be a nonempty array");
    for (const json& r : roots)
        rs.roots.push_back(parse_vector(r, "root"));
    rs.name = spec.value("name", std::string("explicit"));

    if (spec.contains("witness")) {
        rs.witness = parse_vector(spec["witness"], "witness");
    } else {
        // Deterministic witness search: perturb the root-sum direction until
        // it avoids every hyperplane.
        Vector base = Vector::Zero(rs.ambient_dim);
        for (const Vector& r : rs.roots) base += r / (1.0 + base.norm());
        for (int attempt = 0; attempt < 64; ++attempt) {
            Vector cand = base;
            for (int c = 0; c < rs.ambient_dim; ++c)
                cand[c] += (attempt + 1) * 0.01 * (c + 1) + attempt * 1e-3;
            bool ok = cand.norm() > 1e-12;
            for (const Vector& r : rs.roots)
                if (std::abs(r.dot(cand)) <= 1e-9 * r.norm() * cand.norm())
                    ok = false;
            if (ok) {
                rs.witness = cand;
                break;
            }
        }
        if (rs.witness.size() == 0)
            parse_fail("root system: could not find a witness vector; "
                       "provide 'witness' explicitly");
    }
    for (size_t i = 0; i < rs.roots.size(); ++i)
        if (rs.roots[i].dot(rs.witness) > 0)
            rs.positive.push_back(static_cast<int>(i));
    rs.simple = simple_roots(rs);

    const json& k = require(spec, "k", "root system");
    if (k.is_number()) {
        rs.multiplicity.assign(rs.roots.size(), k.get<double>());
    } else if (k.is_array()) {
        if (k.size() != rs.roots.size())
            parse_fail("root system: 'k' must list one value per root");
        for (const json& v : k) rs.multiplicity.push_back(v.get<double>());
    } else {
        parse_fail("root system: 'k' must be a number or an array");
    }
    return rs;
}

json validation_to_json(const RootSystem& rs, const ValidationReport& report) {
    json out;
    out[kFormatVersionKey] = kRootsFormat;
    out["name"] = rs.name;
    out["dimension"] = rs.ambient_dim;
    out["num_roots"] = rs.roots.size();
    out["num_positive"] = rs.positive.size();
    out["num_simple"] = rs.simple.size();
    out["num_orbits"] = root_orbits(rs).size();
    out["valid"] = report.valid;
    out["failures"] = report.failures;
    return out;
}

json classify_to_json(const PolyhedralModel& model) {
    json out;
    out[kFormatVersionKey] = kClassifyFormat;
    out["model"] = model.name();
    json rows = json::array();
    int indeterminate = 0;
    for (const FaceClassification& row : classify_model(model)) {
        json rj;
        rj["face"] = row.face_index;
        rj["label"] = row.label;
        if (row.result) {
            rj["class"] = to_string(row.result->cls);
            if (row.result->diag.declared_exponent)
                rj["gamma_declared"] = *row.result->diag.declared_exponent;
            if (row.result->diag.regressed_exponent)
                rj["gamma_regressed"] = *row.result->diag.regressed_exponent;
            rj["method"] = row.result->diag.method;
        } else {
            rj["class"] = "indeterminate";
            rj["error"] = row.error;
            ++indeterminate;
        }
        rj["exposed"] = row.exposed;
        rj["prediction"] = row.prediction;
        rows.push_back(std::move(rj));
    }
    out["faces"] = std::move(rows);
    out["indeterminate_count"] = indeterminate;
    return out;
}

json ensemble_report_to_json(const EnsembleReport& report) {
    json out;
    out[kFormatVersionKey] = kEnsembleFormat;
    out["model"] = report.model_name;
    out["n"] = report.n_trajectories;
    out["config"] = sim_config_to_json(report.config);
    json faces = json::array();
    for (const FaceReport& f : report.faces) {
        json fj;
        fj["face"] = f.face_index;
        fj["label"] = f.label;
        fj["hits"] = f.hits;
        fj["hit_fraction"] = f.hit_fraction;
        fj["hit_ci"] = {f.hit_ci.low, f.hit_ci.high};
        fj["min_gap_q01"] = f.min_gap_q01;
        fj["min_gap_q50"] = f.min_gap_q50;
        fj["mean_local_time"] = f.mean_local_time;
        fj["stderr_local_time"] = f.stderr_local_time;
        fj["mean_drift_integral"] = f.mean_drift_integral;
        fj["class"] = f.boundary_class;
        fj["prediction"] = f.prediction;
        fj["exposed"] = f.exposed;
        fj["verdict"] = f.verdict;
        faces.push_back(std::move(fj));
    }
    out["faces"] = std::move(faces);
    json subsets = json::array();
    for (const SubsetReport& s : report.subsets) {
        json sj;
        sj["indices"] = s.indices;
        sj["hits"] = s.hits;
        sj["hit_fraction"] = s.hit_fraction;
        sj["hit_ci"] = {s.hit_ci.low, s.hit_ci.high};
        sj["min_distance_q01"] = s.min_distance_q01;
        sj["min_distance_q50"] = s.min_distance_q50;
        subsets.push_back(std::move(sj));
    }
    out["subsets"] = std::move(subsets);
    out["terminal"] = {
        {"mean_sq_radius", report.terminal.mean_sq_radius},
        {"stderr_sq_radius", report.terminal.stderr_sq_radius},
        {"second_moment_sq_radius", report.terminal.second_moment_sq_radius},
        {"coordinate_mean", report.terminal.coordinate_mean},
        {"coordinate_second_moment", report.terminal.coordinate_second_moment},
    };
    out["termination"] = {{"horizon", report.terminated_by_horizon},
                          {"escape", report.terminated_by_escape}};
    out["wall_clock_seconds"] = report.wall_clock_seconds;
    return out;
}

json trajectory_summary_to_json(const Trajectory& traj,
                                const PolyhedralModel& model,
                                const SimConfig& config) {
    json out;
    out[kFormatVersionKey] = kSimulateFormat;
    out["model"] = model_to_json(model);
    out["config"] = sim_config_to_json(config);
    out["trajectory_index"] = traj.trajectory_index;
    out["steps"] = traj.steps_taken;
    out["terminal_time"] = traj.terminal_time;
    out["terminal_state"] = vector_to_json(traj.terminal_state);
    out["termination"] =
        traj.termination == Termination::Horizon ? "horizon" : "escape";
    out["min_gaps"] = vector_to_json(traj.min_gaps);
    out["local_time"] = vector_to_json(traj.local_time);
    out["drift_integral"] = vector_to_json(traj.drift_integral);
    json hits = json::array();
    for (size_t i = 0; i < traj.face_hits.size(); ++i) {
        if (traj.face_hits[i])
            hits.push_back({{"face", i},
                            {"time", traj.face_hits[i]->time},
                            {"exclusive", traj.face_hits[i]->exclusive}});
        else
            hits.push_back(nullptr);
    }
    out["face_first_hits"] = std::move(hits);
    json subset_hits = json::array();
    for (size_t s = 0; s < traj.subset_hits.size(); ++s) {
        json sj;
        sj["indices"] = model.monitored_subsets()[s].indices;
        sj["first_hit"] =
            traj.subset_hits[s] ? json(*traj.subset_hits[s]) : json(nullptr);
        sj["min_distance"] = traj.min_subset_distance[s];
        subset_hits.push_back(std::move(sj));
    }
    out["subset_hits"] = std::move(subset_hits);
    return out;
}

std::string trajectory_to_csv(const Trajectory& traj, const PolyhedralModel& model,
                              const SimConfig& config, bool include_gaps) {
    std::ostringstream os;
    os.precision(17);
    os << "# " << kTrajectoryFormat << "\n";
    json meta;
    meta["model"] = model_to_json(model);
    meta["config"] = sim_config_to_json(config);
    os << "# config: " << meta.dump() << "\n";

    const int d = model.dimension();
    const int m = model.num_faces();
    os << "t";
    for (int c = 0; c < d; ++c) os << ",x_" << (c + 1);
    if (include_gaps)
        for (int i = 0; i < m; ++i) os << ",gap_" << (i + 1);
    for (int i = 0; i < m; ++i) os << ",L_" << (i + 1);
    os << "\n";

    Vector cumulative = Vector::Zero(m);
    Vector gaps(m);
    for (const StepRecord& rec : traj.records) {
        cumulative += rec.local_time_increment;
        os << rec.t;
        for (int c = 0; c < d; ++c) os << "," << rec.x[c];
        if (include_gaps) {
            model.domain().gaps(rec.x, gaps);
            for (int i = 0; i < m; ++i) os << "," << gaps[i];
        }
        for (int i = 0; i < m; ++i) os << "," << cumulative[i];
        os << "\n";
    }
    return os.str();
}

}  // namespace chamber
