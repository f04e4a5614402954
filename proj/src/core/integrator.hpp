#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/models.hpp"
#include "core/rng.hpp"

namespace chamber {

enum class Scheme { ProxEuler, ProjectedEuler };

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1.0;
    uint64_t seed = 0;
    Scheme scheme = Scheme::ProxEuler;
    double hit_eps = 1e-3;   // face-hit threshold
    double edge_eps = 1e-3;  // monitored-subset hit threshold
    double escape_radius = kInf;
    int record_stride = 1;   // 0: keep only the initial and final records

    void validate() const;
};

struct StepRecord {
    double t = 0.0;
    Vector x;
    Vector brownian;              // increment consumed by this step
    Vector local_time_increment;  // per-face reflection mass
    double drift_magnitude = 0.0; // |grad Phi| at the recorded state
};

struct FaceHit {
    double time = 0.0;
    bool exclusive = false;  // no other face within hit_eps at the hit step:
                             // the sigma estimate doubles as a tau estimate
};

enum class Termination { Horizon, Escape };

struct Trajectory {
    std::vector<StepRecord> records;
    Vector min_gaps;        // per-face minimum over every step
    Vector local_time;      // per-face accumulated multiplier mass
    Vector drift_integral;  // per-face sum dt * |phi_i'(gap_i)|
    std::vector<std::optional<FaceHit>> face_hits;
    std::vector<std::optional<double>> subset_hits;
    Vector min_subset_distance;
    Vector terminal_state;
    double terminal_time = 0.0;
    Termination termination = Termination::Horizon;
    uint64_t trajectory_index = 0;
    int64_t steps_taken = 0;
};

struct StepResult {
    Vector x_next;
    Vector multipliers;  // per-face, >= 0; structurally zero on faces with
                         // phi'(0+) = -inf
    int sweeps = 0;
    bool degenerate = false;
};

// Per-trajectory stepping engine; owns reusable workspace, shares the model
// read-only.
class Stepper {
  public:
    Stepper(const PolyhedralModel& model, Scheme scheme);

    // Backward-Euler proximal step: x_next = argmin_{y in cl(D)}
    // |y - (x+dB)|^2/2 + dt*Phi(y), solved by cyclic per-face proximal
    // sweeps (Dykstra splitting); multipliers collect the reflection mass.
    StepResult prox_step(const Vector& x, const Vector& dB, double dt);

    // Explicit benchmark scheme: Euclidean projection of the drifted point,
    // drift clamped at |grad Phi| <= 10/sqrt(dt).
    StepResult projected_euler_step(const Vector& x, const Vector& dB, double dt);

    StepResult step(const Vector& x, const Vector& dB, double dt);

  private:
    const PolyhedralModel& model_;
    Scheme scheme_;
    bool all_reflective_;  // every potential has a closed-form projection step
    std::vector<double> corrections_;
    Vector work_y_, work_w_, work_gaps_;
};

// One-shot wrappers.
StepResult prox_step(const PolyhedralModel& model, const Vector& x,
                     const Vector& dB, double dt);
StepResult projected_euler_step(const PolyhedralModel& model, const Vector& x,
                                const Vector& dB, double dt);

// Iterate the configured scheme with Gaussian increments of variance dt per
// coordinate from the (seed, trajectory_index) substream; accumulate local
// times, minimum gaps, hit times and the drift integral.  `keep_records`
// off discards the thinned record list (ensemble mode).
Trajectory simulate(const PolyhedralModel& model, const SimConfig& config,
                    uint64_t trajectory_index = 0, bool keep_records = true);

}  // namespace chamber
