#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/classifier.hpp"
#include "core/integrator.hpp"
#include "core/models.hpp"

namespace chamber {

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

// 95% Wilson score interval; well behaved at empirical fractions 0 and 1.
WilsonInterval wilson95(int64_t hits, int64_t n);

struct FaceReport {
    int face_index = 0;
    std::string label;
    int64_t hits = 0;
    double hit_fraction = 0.0;
    WilsonInterval hit_ci;
    double min_gap_q01 = 0.0;  // 1% quantile of per-trajectory minimum gaps
    double min_gap_q50 = 0.0;
    double mean_local_time = 0.0;
    double stderr_local_time = 0.0;
    double mean_drift_integral = 0.0;
    // Classifier verdict line.
    std::string boundary_class;  // "weak" | "middle" | "strong" | "indeterminate"
    std::string prediction;
    bool exposed = true;
    std::string verdict;  // CONSISTENT | INCONSISTENT | (empty when untestable)
};

struct SubsetReport {
    std::vector<int> indices;
    int64_t hits = 0;
    double hit_fraction = 0.0;
    WilsonInterval hit_ci;
    double min_distance_q01 = 0.0;
    double min_distance_q50 = 0.0;
};

struct TerminalMoments {
    double mean_sq_radius = 0.0;
    double stderr_sq_radius = 0.0;
    double second_moment_sq_radius = 0.0;
    std::vector<double> coordinate_mean;
    std::vector<double> coordinate_second_moment;
};

struct EnsembleReport {
    int64_t n_trajectories = 0;
    std::vector<FaceReport> faces;
    std::vector<SubsetReport> subsets;
    TerminalMoments terminal;
    int64_t terminated_by_horizon = 0;
    int64_t terminated_by_escape = 0;
    SimConfig config;
    std::string model_name;
    double wall_clock_seconds = 0.0;
};

// N independent trajectories on keyed substreams (trajectory index = stream
// id), merged in index order so the result is identical for any worker count.
// `threads` 0 resolves to CHAMBER_THREADS or hardware concurrency.  Any
// trajectory error aborts with the failing index in the message.
EnsembleReport run_ensemble(const PolyhedralModel& model, const SimConfig& config,
                            int64_t n_trajectories, int threads = 0);

// Hit statistics for one edge set H_J, |J| >= 2 (throws EmptyIntersection
// when the constraints are inconsistent).
SubsetReport edge_watch(const PolyhedralModel& model, const SimConfig& config,
                        int64_t n_trajectories, const FaceSubset& J,
                        int threads = 0);

struct Observable {
    enum class Kind { SquaredRadius, Coordinate, LocalTime } kind;
    int index = -1;  // coordinate index, or face index (-1: total local time)
};

struct MomentCheck {
    double estimate = 0.0;
    double stderr_of_mean = 0.0;
    std::optional<double> target;
    std::optional<double> z_score;  // absent when target missing or stderr 0
};

MomentCheck moment_check(const PolyhedralModel& model, const SimConfig& config,
                         int64_t n_trajectories, const Observable& obs,
                         std::optional<double> target = std::nullopt,
                         int threads = 0);

int resolve_thread_count(int requested);

}  // namespace chamber
