// chamber CLI: classify | simulate | ensemble | validate-roots | list-models.
// A thin front end over the chamber C API; all numerics live behind it.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "chamber/chamber.h"

using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 usage/schema, 2 indeterminate classification,
// 3 validation failure, 4 runtime simulation failure.
int exit_code_for(chamber_status status) {
    switch (status) {
        case CHAMBER_OK: return 0;
        case CHAMBER_ERROR_PARSE: return 1;
        case CHAMBER_ERROR_INVALID_ARGUMENT: return 1;
        case CHAMBER_ERROR_INDETERMINATE: return 2;
        case CHAMBER_ERROR_VALIDATION: return 3;
        case CHAMBER_ERROR_RUNTIME: return 4;
    }
    return 4;
}

[[noreturn]] void fail(chamber_status status) {
    std::cerr << "error: " << chamber_last_error() << "\n";
    std::exit(exit_code_for(status));
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { chamber_string_free(ptr); }
};

struct OwnedModel {
    chamber_model* ptr = nullptr;
    ~OwnedModel() { chamber_model_free(ptr); }
};

struct OwnedTrajectory {
    chamber_trajectory* ptr = nullptr;
    ~OwnedTrajectory() { chamber_trajectory_free(ptr); }
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open config file: " << path << "\n";
        std::exit(1);
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        std::cerr << "error: invalid JSON in " << path << ": " << e.what()
                  << "\n";
        std::exit(1);
    }
}

struct SimFlags {
    std::optional<uint64_t> seed;
    std::optional<double> dt, horizon, hit_eps, edge_eps, escape_radius;
    std::optional<std::string> scheme;
    std::optional<int> record_stride;
};

void add_sim_flags(CLI::App* cmd, SimFlags& flags) {
    cmd->add_option("--seed", flags.seed, "RNG seed (required here or in the config)");
    cmd->add_option("--dt", flags.dt, "time step");
    cmd->add_option("--horizon", flags.horizon, "time horizon T");
    cmd->add_option("--hit-eps", flags.hit_eps, "face-hit threshold");
    cmd->add_option("--edge-eps", flags.edge_eps, "edge-hit threshold");
    cmd->add_option("--escape-radius", flags.escape_radius,
                    "stop when |X| reaches this radius");
    cmd->add_option("--scheme", flags.scheme, "prox | projected");
    cmd->add_option("--record-stride", flags.record_stride,
                    "record every k-th step (0: ends only)");
}

// A config document is either a full run config with a "model" section or a
// bare model spec.
json split_model_spec(const json& doc) {
    return doc.contains("model") ? doc["model"] : doc;
}

json assemble_sim(const json& doc, const SimFlags& flags) {
    json sim = doc.contains("sim") ? doc["sim"] : json::object();
    if (flags.seed) sim["seed"] = *flags.seed;
    if (flags.dt) sim["dt"] = *flags.dt;
    if (flags.horizon) sim["horizon"] = *flags.horizon;
    if (flags.hit_eps) sim["hit_eps"] = *flags.hit_eps;
    if (flags.edge_eps) sim["edge_eps"] = *flags.edge_eps;
    if (flags.escape_radius) sim["escape_radius"] = *flags.escape_radius;
    if (flags.scheme) sim["scheme"] = *flags.scheme;
    if (flags.record_stride) sim["record_stride"] = *flags.record_stride;
    return sim;
}

OwnedModel build_model(const json& model_spec) {
    OwnedModel model;
    const chamber_status status =
        chamber_model_from_json(model_spec.dump().c_str(), &model.ptr);
    if (status != CHAMBER_OK) fail(status);
    return model;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        std::exit(4);
    }
    out << body;
}

int cmd_classify(const std::string& config_path, const std::string& format) {
    const json doc = load_json_file(config_path);
    OwnedModel model = build_model(split_model_spec(doc));

    OwnedString report;
    const chamber_status status = chamber_classify_json(model.ptr, &report.ptr);
    if (status != CHAMBER_OK) fail(status);
    const json table = json::parse(report.ptr);

    if (format == "json") {
        std::cout << table.dump(2) << "\n";
    } else {
        std::printf("%-4s %-18s %-14s %-10s %s\n", "face", "label", "class",
                    "gamma", "prediction");
        for (const auto& row : table["faces"]) {
            std::string gamma = "-";
            if (row.contains("gamma_declared"))
                gamma = std::to_string(row["gamma_declared"].get<double>());
            else if (row.contains("gamma_regressed"))
                gamma = std::to_string(row["gamma_regressed"].get<double>()) + "~";
            std::printf("%-4d %-18s %-14s %-10s %s\n", row["face"].get<int>(),
                        row["label"].get<std::string>().c_str(),
                        row["class"].get<std::string>().c_str(), gamma.c_str(),
                        row["prediction"].get<std::string>().c_str());
        }
    }
    return table["indeterminate_count"].get<int>() > 0 ? 2 : 0;
}

int cmd_simulate(const std::string& config_path, const SimFlags& flags,
                 const std::string& out_dir, const std::string& format) {
    const json doc = load_json_file(config_path);
    OwnedModel model = build_model(split_model_spec(doc));
    const json sim = assemble_sim(doc, flags);

    OwnedTrajectory traj;
    chamber_status status =
        chamber_simulate_json(model.ptr, sim.dump().c_str(), &traj.ptr);
    if (status != CHAMBER_OK) fail(status);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    OwnedString summary;
    status = chamber_trajectory_summary_json(traj.ptr, &summary.ptr);
    if (status != CHAMBER_OK) fail(status);
    write_file(dir / "simulate_summary.json", std::string(summary.ptr) + "\n");

    if (format != "json") {
        OwnedString csv;
        status = chamber_trajectory_to_csv(traj.ptr, /*include_gaps=*/1, &csv.ptr);
        if (status != CHAMBER_OK) fail(status);
        write_file(dir / "trajectory.csv", csv.ptr);
    }

    const json info = json::parse(summary.ptr);
    std::cout << "termination: " << info["termination"].get<std::string>()
              << "  steps: " << info["steps"] << "  t: " << info["terminal_time"]
              << "\nwrote " << (dir / "simulate_summary.json").string();
    if (format != "json") std::cout << " and " << (dir / "trajectory.csv").string();
    std::cout << "\n";
    return 0;
}

int cmd_ensemble(const std::string& config_path, const SimFlags& flags,
                 int64_t n_flag, const std::string& out_dir,
                 const std::string& format) {
    const json doc = load_json_file(config_path);
    int64_t n = n_flag;
    if (n <= 0 && doc.contains("ensemble") && doc["ensemble"].contains("n"))
        n = doc["ensemble"]["n"].get<int64_t>();
    if (n <= 0) {
        std::cerr << "error: ensemble size --n must be >= 1\n";
        return 1;
    }
    OwnedModel model = build_model(split_model_spec(doc));
    const json sim = assemble_sim(doc, flags);

    OwnedString report;
    const chamber_status status = chamber_ensemble_json(
        model.ptr, sim.dump().c_str(), n, /*threads=*/0, &report.ptr);
    if (status != CHAMBER_OK) fail(status);

    std::filesystem::create_directories(out_dir);
    const std::filesystem::path path =
        std::filesystem::path(out_dir) / "ensemble_report.json";
    write_file(path, std::string(report.ptr) + "\n");

    const json doc_report = json::parse(report.ptr);
    if (format == "json") {
        std::cout << doc_report.dump(2) << "\n";
    } else {
        std::printf("%-4s %-18s %-8s %-10s %-12s %-12s %s\n", "face", "label",
                    "class", "hits", "fraction", "min_gap_q01", "verdict");
        for (const auto& row : doc_report["faces"]) {
            std::printf("%-4d %-18s %-8s %-10lld %-12.5f %-12.6f %s\n",
                        row["face"].get<int>(),
                        row["label"].get<std::string>().c_str(),
                        row["class"].get<std::string>().c_str(),
                        static_cast<long long>(row["hits"].get<int64_t>()),
                        row["hit_fraction"].get<double>(),
                        row["min_gap_q01"].get<double>(),
                        row["verdict"].get<std::string>().c_str());
        }
        for (const auto& sub : doc_report["subsets"]) {
            std::cout << "edge " << sub["indices"].dump()
                      << ": fraction=" << sub["hit_fraction"]
                      << " min_distance_q01=" << sub["min_distance_q01"] << "\n";
        }
        std::cout << "report: " << path.string() << "\n";
    }
    return 0;
}

int cmd_validate_roots(const std::string& config_path, const std::string& family,
                       int rank, const std::vector<double>& k) {
    json spec;
    if (!config_path.empty()) {
        spec = load_json_file(config_path);
    } else if (!family.empty()) {
        spec["family"] = family;
        spec["rank"] = rank;
        spec["k"] = k;
    } else {
        std::cerr << "error: provide --config or --family/--rank/--k\n";
        return 1;
    }

    OwnedString report;
    const chamber_status status =
        chamber_validate_roots_json(spec.dump().c_str(), &report.ptr);
    if (status != CHAMBER_OK) fail(status);
    const json doc = json::parse(report.ptr);
    std::cout << doc.dump(2) << "\n";
    return doc["valid"].get<bool>() ? 0 : 3;
}

int cmd_list_models() {
    std::cout <<
        "model kinds (JSON config grammar):\n"
        "  {\"kind\":\"rost_vares\", \"n\":3, \"phi\":{\"kind\":\"log\",\"gamma\":0.2}}\n"
        "      n ordered particles, nearest-neighbor repulsion phi(sqrt(2) u)\n"
        "  {\"kind\":\"wishart\", \"n\":2, \"delta\":3.0}\n"
        "      ordered radii 0 < r_1 < ... < r_n, log barriers (delta >= n)\n"
        "  {\"kind\":\"dunkl\", \"family\":\"A\"|\"B\"|\"D\"|\"I2\", \"rank\":2, \"k\":[0.75]}\n"
        "      radial Dunkl process in the Weyl chamber, one k per root orbit\n"
        "  {\"kind\":\"trig\", \"n\":3, \"gamma\":0.5}\n"
        "      circular particles, log-sin pair repulsion with wrap-around faces\n"
        "  {\"kind\":\"hyperbolic\", \"n\":3, \"gamma\":0.7}\n"
        "      ordered particles, log-sinh pair repulsion\n"
        "  {\"kind\":\"custom\", \"dimension\":d, \"faces\":[...], \"initial\":[...],\n"
        "   \"monitored\":[[i,j],...], \"normalize\":false}\n"
        "      explicit faces; each face {\"normal\":[...], \"offset\":a,\n"
        "      \"potential\":{...}, \"label\":\"...\"}\n"
        "potential kinds: zero | log | shifted_log | trig_log_sin | hyp_log_sinh\n"
        "               | scaled_arg {scale, inner}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chamber: reflected-repelled Brownian motion in convex "
                 "polyhedral domains"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "csv";
    SimFlags flags;
    int64_t n = 0;

    auto* classify = app.add_subcommand(
        "classify", "per-face boundary classification (weak/middle/strong)");
    classify->add_option("--config", config_path, "model or run config JSON")
        ->required();
    std::string classify_format = "table";
    classify->add_option("--format", classify_format, "table | json");

    auto* simulate = app.add_subcommand("simulate", "single trajectory");
    simulate->add_option("--config", config_path, "model or run config JSON")
        ->required();
    simulate->add_option("--out", out_dir, "output directory");
    simulate->add_option("--format", format, "csv | json (json: summary only)");
    add_sim_flags(simulate, flags);

    auto* ensemble = app.add_subcommand(
        "ensemble", "Monte Carlo ensemble with verdicts against the classifier");
    ensemble->add_option("--config", config_path, "model or run config JSON")
        ->required();
    ensemble->add_option("--n", n, "number of trajectories");
    ensemble->add_option("--out", out_dir, "output directory");
    std::string ensemble_format = "table";
    ensemble->add_option("--format", ensemble_format, "table | json");
    add_sim_flags(ensemble, flags);

    auto* roots = app.add_subcommand("validate-roots",
                                     "check the root-system axioms");
    std::string family;
    int rank = 0;
    std::vector<double> kvals;
    roots->add_option("--config", config_path, "root-system JSON");
    roots->add_option("--family", family, "A | B | D | I2");
    roots->add_option("--rank", rank, "rank (or m for I2)");
    roots->add_option("--k", kvals, "multiplicity per orbit")->delimiter(',');

    app.add_subcommand("list-models", "print the model zoo and config grammar");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("classify"))
            return cmd_classify(config_path, classify_format);
        if (app.got_subcommand("simulate"))
            return cmd_simulate(config_path, flags, out_dir, format);
        if (app.got_subcommand("ensemble"))
            return cmd_ensemble(config_path, flags, n, out_dir, ensemble_format);
        if (app.got_subcommand("validate-roots"))
            return cmd_validate_roots(config_path, family, rank, kvals);
        if (app.got_subcommand("list-models")) return cmd_list_models();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 1;
}
