#include "core/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace chamber {

WilsonInterval wilson95(int64_t hits, int64_t n) {
    if (n <= 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - half) / denom),
            std::min(1.0, (center + half) / denom)};
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CHAMBER_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Everything the reducer needs from one trajectory.
struct TrajectorySummary {
    Vector min_gaps;
    Vector local_time;
    Vector drift_integral;
    std::vector<bool> face_hit;
    std::vector<bool> subset_hit;
    Vector min_subset_distance;
    Vector terminal_state;
    Termination termination = Termination::Horizon;
};

std::vector<TrajectorySummary> run_all(const PolyhedralModel& model,
                                       const SimConfig& config,
                                       int64_t n, int threads) {
    if (n < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "ensemble needs at least one trajectory");
    std::vector<TrajectorySummary> summaries(static_cast<size_t>(n));
    const int workers = std::min<int64_t>(resolve_thread_count(threads), n);

    std::atomic<int64_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_message;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                Trajectory t = simulate(model, config,
                                        static_cast<uint64_t>(i),
                                        /*keep_records=*/false);
                TrajectorySummary& s = summaries[static_cast<size_t>(i)];
                s.min_gaps = std::move(t.min_gaps);
                s.local_time = std::move(t.local_time);
                s.drift_integral = std::move(t.drift_integral);
                s.face_hit.resize(t.face_hits.size());
                for (size_t f = 0; f < t.face_hits.size(); ++f)
                    s.face_hit[f] = t.face_hits[f].has_value();
                s.subset_hit.resize(t.subset_hits.size());
                for (size_t f = 0; f < t.subset_hits.size(); ++f)
                    s.subset_hit[f] = t.subset_hits[f].has_value();
                s.min_subset_distance = std::move(t.min_subset_distance);
                s.terminal_state = std::move(t.terminal_state);
                s.termination = t.termination;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failed.exchange(true))
                    failure_message = "trajectory " + std::to_string(i) +
                                      " (seed " + std::to_string(config.seed) +
                                      "): " + e.what();
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed) throw Error(ErrorCode::Runtime, failure_message);
    return summaries;
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const auto idx = static_cast<size_t>(
        std::min<double>(values.size() - 1.0,
                         std::max(0.0, std::ceil(q * values.size()) - 1.0)));
    return values[idx];
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& v) {
    MeanStderr out;
    const auto n = static_cast<double>(v.size());
    if (v.empty()) return out;
    double sum = 0.0;
    for (double x : v) sum += x;
    out.mean = sum / n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        out.stderr_of_mean = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

std::string face_verdict(const FaceReport& face) {
    if (face.boundary_class == "indeterminate") return "";
    // "Never hits" needs both a zero empirical fraction and minimum gaps
    // bounded away from the threshold; finite ensembles cannot verify the
    // almost-sure statement itself.
    const bool expect_unreachable =
        face.boundary_class == "strong" || !face.exposed;
    if (expect_unreachable)
        return face.hits == 0 ? "CONSISTENT" : "INCONSISTENT";
    return face.hits > 0 ? "CONSISTENT" : "INCONSISTENT";
}

}  // namespace

EnsembleReport run_ensemble(const PolyhedralModel& model, const SimConfig& config,
                            int64_t n_trajectories, int threads) {
    config.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const auto summaries = run_all(model, config, n_trajectories, threads);
    const int m = model.num_faces();
    const int n_subsets = static_cast<int>(model.monitored_subsets().size());
    const auto n = static_cast<double>(n_trajectories);

    EnsembleReport report;
    report.n_trajectories = n_trajectories;
    report.config = config;
    report.model_name = model.name();

    const auto classes = classify_model(model);
    for (int i = 0; i < m; ++i) {
        FaceReport face;
        face.face_index = i;
        face.label = model.domain().face(i).label;
        std::vector<double> mins, ltimes, dints;
        mins.reserve(summaries.size());
        for (const auto& s : summaries) {
            if (s.face_hit[i]) ++face.hits;
            mins.push_back(s.min_gaps[i]);
            ltimes.push_back(s.local_time[i]);
            dints.push_back(s.drift_integral[i]);
        }
        face.hit_fraction = face.hits / n;
        face.hit_ci = wilson95(face.hits, n_trajectories);
        face.min_gap_q01 = quantile(mins, 0.01);
        face.min_gap_q50 = quantile(mins, 0.50);
        const MeanStderr lt = mean_stderr(ltimes);
        face.mean_local_time = lt.mean;
        face.stderr_local_time = lt.stderr_of_mean;
        face.mean_drift_integral = mean_stderr(dints).mean;
        const FaceClassification& cls = classes[i];
        face.boundary_class =
            cls.result ? to_string(cls.result->cls) : "indeterminate";
        face.prediction = cls.prediction;
        face.exposed = cls.exposed;
        face.verdict = face_verdict(face);
        report.faces.push_back(std::move(face));
    }

    for (int s = 0; s < n_subsets; ++s) {
        SubsetReport sub;
        sub.indices = model.monitored_subsets()[s].indices;
        std::vector<double> mins;
        for (const auto& summary : summaries) {
            if (summary.subset_hit[s]) ++sub.hits;
            mins.push_back(summary.min_subset_distance[s]);
        }
        sub.hit_fraction = sub.hits / n;
        sub.hit_ci = wilson95(sub.hits, n_trajectories);
        sub.min_distance_q01 = quantile(mins, 0.01);
        sub.min_distance_q50 = quantile(mins, 0.50);
        report.subsets.push_back(std::move(sub));
    }

    std::vector<double> sq_radii;
    report.terminal.coordinate_mean.assign(model.dimension(), 0.0);
    report.terminal.coordinate_second_moment.assign(model.dimension(), 0.0);
    for (const auto& s : summaries) {
        sq_radii.push_back(s.terminal_state.squaredNorm());
        for (int c = 0; c < model.dimension(); ++c) {
            report.terminal.coordinate_mean[c] += s.terminal_state[c] / n;
            report.terminal.coordinate_second_moment[c] +=
                s.terminal_state[c] * s.terminal_state[c] / n;
        }
        if (s.termination == Termination::Horizon)
            ++report.terminated_by_horizon;
        else
            ++report.terminated_by_escape;
    }
    const MeanStderr sq = mean_stderr(sq_radii);
    report.terminal.mean_sq_radius = sq.mean;
    report.terminal.stderr_sq_radius = sq.stderr_of_mean;
    double second = 0.0;
    for (double v : sq_radii) second += v * v / n;
    report.terminal.second_moment_sq_radius = second;

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return report;
}

SubsetReport edge_watch(const PolyhedralModel& model, const SimConfig& config,
                        int64_t n_trajectories, const FaceSubset& J,
                        int threads) {
    if (J.indices.size() < 2)
        throw Error(ErrorCode::InvalidArgument,
                    "edge_watch needs at least two faces");
    J.check_range(model.num_faces());
    model.domain().subset_corrector(J);  // throws when H_J is empty
    const PolyhedralModel watching = model.with_monitored({J});
    EnsembleReport report = run_ensemble(watching, config, n_trajectories, threads);
    return report.subsets.front();
}

MomentCheck moment_check(const PolyhedralModel& model, const SimConfig& config,
                         int64_t n_trajectories, const Observable& obs,
                         std::optional<double> target, int threads) {
    config.validate();
    if (obs.kind == Observable::Kind::Coordinate &&
        (obs.index < 0 || obs.index >= model.dimension()))
        throw Error(ErrorCode::InvalidArgument, "coordinate index out of range");
    if (obs.kind == Observable::Kind::LocalTime && obs.index >= model.num_faces())
        throw Error(ErrorCode::InvalidArgument, "face index out of range");

    const auto summaries = run_all(model, config, n_trajectories, threads);
    std::vector<double> values;
    values.reserve(summaries.size());
    for (const auto& s : summaries) {
        switch (obs.kind) {
            case Observable::Kind::SquaredRadius:
                values.push_back(s.terminal_state.squaredNorm());
                break;
            case Observable::Kind::Coordinate:
                values.push_back(s.terminal_state[obs.index]);
                break;
            case Observable::Kind::LocalTime:
                values.push_back(obs.index < 0 ? s.local_time.sum()
                                               : s.local_time[obs.index]);
                break;
        }
    }
    const MeanStderr ms = mean_stderr(values);
    MomentCheck out;
    out.estimate = ms.mean;
    out.stderr_of_mean = ms.stderr_of_mean;
    out.target = target;
    if (target && ms.stderr_of_mean > 0)
        out.z_score = (ms.mean - *target) / ms.stderr_of_mean;
    return out;
}

}  // namespace chamber
