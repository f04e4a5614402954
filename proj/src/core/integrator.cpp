#include "core/integrator.hpp"

#include <cmath>
#include <functional>

namespace chamber {

void SimConfig::validate() const {
    if (!(dt > 0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
    if (!(horizon >= 0))
        throw Error(ErrorCode::InvalidArgument, "horizon must be >= 0");
    if (!(hit_eps > 0))
        throw Error(ErrorCode::InvalidArgument, "hit_eps must be > 0");
    if (!(edge_eps > 0))
        throw Error(ErrorCode::InvalidArgument, "edge_eps must be > 0");
    if (!(escape_radius > 0))
        throw Error(ErrorCode::InvalidArgument, "escape_radius must be > 0");
    if (record_stride < 0)
        throw Error(ErrorCode::InvalidArgument, "record_stride must be >= 0");
}

Stepper::Stepper(const PolyhedralModel& model, Scheme scheme)
    : model_(model), scheme_(scheme) {
    all_reflective_ = true;
    for (int i = 0; i < model.num_faces(); ++i) {
        const BarrierPotential& p = model.potential_for_face(i);
        if (p.kind() != "zero") all_reflective_ = false;
    }
    corrections_.assign(model.num_faces(), 0.0);
}

StepResult Stepper::prox_step(const Vector& x, const Vector& dB, double dt) {
    const int m = model_.num_faces();
    const PolyhedralDomain& dom = model_.domain();
    StepResult result;
    result.multipliers = Vector::Zero(m);

    work_w_ = x + dB;

    // Pure reflection: the prox is exactly the Euclidean projection, which
    // the dual active-set method solves finitely.
    if (all_reflective_) {
        ProjectionResult proj = dom.project(work_w_);
        result.x_next = std::move(proj.point);
        result.multipliers = std::move(proj.multipliers);
        result.sweeps = proj.iterations;
        result.degenerate = proj.degenerate;
        return result;
    }

    // Dykstra-style cyclic proximal sweeps: each block removes the face's
    // stored correction, solves the 1-D prox along its unit normal and adds
    // the fresh correction back.  Strict convexity of the objective gives
    // monotone convergence to the unique minimizer.
    std::fill(corrections_.begin(), corrections_.end(), 0.0);
    work_y_ = work_w_;
    const double scale = 1.0 + work_w_.norm();
    const double stop_tol = 1e-14 * scale;
    const int max_sweeps = 4000;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_delta = 0.0;
        for (int i = 0; i < m; ++i) {
            const Face& f = dom.face(i);
            const double u_removed =
                f.normal.dot(work_y_) - f.offset - corrections_[i];
            const Prox1dResult pr =
                prox1d(model_.potential_for_face(i), u_removed, dt);
            const double s_new = pr.y - u_removed;
            const double delta = s_new - corrections_[i];
            if (delta != 0.0) work_y_ += delta * f.normal;
            corrections_[i] = s_new;
            result.multipliers[i] = pr.multiplier;
            max_delta = std::max(max_delta, std::abs(delta));
        }
        ++result.sweeps;
        if (max_delta <= stop_tol && sweep > 0) break;
    }

    // Quality gate: KKT residual of the full step.
    dom.gaps(work_y_, work_gaps_);
    Vector residual = work_y_ - work_w_;
    for (int i = 0; i < m; ++i) {
        const Face& f = dom.face(i);
        const BarrierPotential& p = model_.potential_for_face(i);
        const double g = work_gaps_[i];
        const double slope =
            g > 0 ? p.derivative(g) : p.derivative_limit_at_zero();
        residual += f.normal * (dt * slope - result.multipliers[i]);
    }
    if (residual.norm() > 1e-9 * (1.0 + x.norm()))
        throw Error(ErrorCode::SolverFailure,
                    "prox step residual " + std::to_string(residual.norm()) +
                        " after " + std::to_string(result.sweeps) + " sweeps");

    // Finite sweeps can leave a face a hair infeasible; polish with the exact
    // projection.  Singular faces are never active here (their prox output is
    // strictly positive), so their multipliers stay exactly zero.
    if (work_gaps_.minCoeff() < -1e-12 * scale) {
        ProjectionResult proj = dom.project(work_y_);
        work_y_ = std::move(proj.point);
        for (int i = 0; i < m; ++i) {
            if (proj.multipliers[i] <= 0) continue;
            const BarrierPotential& p = model_.potential_for_face(i);
            if (std::isfinite(p.derivative_limit_at_zero()))
                result.multipliers[i] += proj.multipliers[i];
            else if (proj.multipliers[i] > 1e-8)
                throw Error(ErrorCode::SolverFailure,
                            "projection polish touched a singular face");
        }
    }

    result.x_next = work_y_;
    return result;
}

StepResult Stepper::projected_euler_step(const Vector& x, const Vector& dB,
                                         double dt) {
    Vector drift = model_.drift(x);
    const double clamp = 10.0 / std::sqrt(dt);
    const double norm = drift.norm();
    if (norm > clamp) drift *= clamp / norm;

    ProjectionResult proj = model_.domain().project(x + dB + dt * drift);
    StepResult result;
    result.x_next = std::move(proj.point);
    result.multipliers = std::move(proj.multipliers);
    result.sweeps = proj.iterations;
    result.degenerate = proj.degenerate;
    return result;
}

StepResult Stepper::step(const Vector& x, const Vector& dB, double dt) {
    return scheme_ == Scheme::ProxEuler ? prox_step(x, dB, dt)
                                        : projected_euler_step(x, dB, dt);
}

StepResult prox_step(const PolyhedralModel& model, const Vector& x,
                     const Vector& dB, double dt) {
    return Stepper(model, Scheme::ProxEuler).prox_step(x, dB, dt);
}

StepResult projected_euler_step(const PolyhedralModel& model, const Vector& x,
                                const Vector& dB, double dt) {
    return Stepper(model, Scheme::ProjectedEuler)
        .projected_euler_step(x, dB, dt);
}

namespace {

double drift_magnitude_at(const PolyhedralModel& model, const Vector& gaps) {
    Vector d = Vector::Zero(model.dimension());
    for (int i = 0; i < model.num_faces(); ++i) {
        const BarrierPotential& p = model.potential_for_face(i);
        const double g = gaps[i];
        const double slope =
            g > 0 ? p.derivative(g) : p.derivative_limit_at_zero();
        d -= model.domain().face(i).normal * slope;
    }
    return d.norm();
}

}  // namespace

Trajectory simulate(const PolyhedralModel& model, const SimConfig& config,
                    uint64_t trajectory_index, bool keep_records) {
    config.validate();
    const int d = model.dimension();
    const int m = model.num_faces();
    const auto& monitored = model.monitored_subsets();
    const int n_subsets = static_cast<int>(monitored.size());

    // Precompute min-norm correctors for the monitored edge sets (also
    // verifies H_J is nonempty before any stepping).
    std::vector<Matrix> correctors;
    correctors.reserve(n_subsets);
    for (const FaceSubset& J : monitored)
        correctors.push_back(model.domain().subset_corrector(J));

    auto subset_distance = [&](int s, const Vector& x) {
        const FaceSubset& J = monitored[s];
        Vector r(static_cast<int>(J.indices.size()));
        for (size_t k = 0; k < J.indices.size(); ++k) {
            const Face& f = model.domain().face(J.indices[k]);
            r[static_cast<int>(k)] = f.normal.dot(x) - f.offset;
        }
        return (correctors[s] * r).norm();
    };

    Trajectory traj;
    traj.trajectory_index = trajectory_index;
    traj.local_time = Vector::Zero(m);
    traj.drift_integral = Vector::Zero(m);
    traj.face_hits.assign(m, std::nullopt);
    traj.subset_hits.assign(n_subsets, std::nullopt);
    traj.min_subset_distance = Vector::Constant(std::max(n_subsets, 0), kInf);

    Vector x = model.initial_point();
    Vector gaps = model.domain().gaps(x);
    traj.min_gaps = gaps;
    for (int s = 0; s < n_subsets; ++s)
        traj.min_subset_distance[s] = subset_distance(s, x);

    const GaussianStream stream(config.seed, static_cast<uint32_t>(trajectory_index));
    Stepper stepper(model, config.scheme);

    const int64_t whole_steps =
        static_cast<int64_t>(std::floor(config.horizon / config.dt + 1e-9));
    const double leftover = config.horizon - whole_steps * config.dt;
    const int64_t n_steps = whole_steps + (leftover > 1e-12 * config.dt ? 1 : 0);
    const int blocks_per_step = (d + 1) / 2;

    if (keep_records) {
        StepRecord rec;
        rec.t = 0.0;
        rec.x = x;
        rec.brownian = Vector::Zero(d);
        rec.local_time_increment = Vector::Zero(m);
        rec.drift_magnitude = drift_magnitude_at(model, gaps);
        traj.records.push_back(std::move(rec));
    }

    // A stalled solve is retried on two half steps joined by a Brownian
    // bridge (conditional mean dB/2, variance dt/4 per coordinate); the
    // bridge noise comes from the step's reserved refinement band so replay
    // stays deterministic.
    uint32_t refine_block = GaussianStream::kRefinementBase;
    Vector xi(d);
    std::function<StepResult(uint64_t, const Vector&, const Vector&, double, int)>
        attempt = [&](uint64_t step_index, const Vector& x0, const Vector& dB0,
                      double dt0, int depth) -> StepResult {
        try {
            return stepper.step(x0, dB0, dt0);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SolverFailure || depth >= 5) throw;
        }
        stream.fill_normals(step_index, refine_block, xi.data(), d);
        refine_block += static_cast<uint32_t>(blocks_per_step);
        const Vector dB1 = 0.5 * dB0 + 0.5 * std::sqrt(dt0) * xi;
        StepResult first = attempt(step_index, x0, dB1, 0.5 * dt0, depth + 1);
        StepResult second =
            attempt(step_index, first.x_next, dB0 - dB1, 0.5 * dt0, depth + 1);
        second.multipliers += first.multipliers;
        second.sweeps += first.sweeps;
        return second;
    };

    double t = 0.0;
    Vector dB(d), z(d);
    Vector pending_mass = Vector::Zero(m);  // local time since the last record
    Termination termination = Termination::Horizon;
    for (int64_t k = 0; k < n_steps; ++k) {
        const double dtk = k < whole_steps ? config.dt : leftover;
        stream.fill_normals(static_cast<uint64_t>(k), 0, z.data(), d);
        dB = std::sqrt(dtk) * z;
        refine_block = GaussianStream::kRefinementBase;

        StepResult step = attempt(static_cast<uint64_t>(k), x, dB, dtk, 0);
        x = std::move(step.x_next);
        t += dtk;
        if (!x.allFinite())
            throw Error(ErrorCode::Runtime,
                        "non-finite state at t = " + std::to_string(t));

        model.domain().gaps(x, gaps);
        traj.local_time += step.multipliers;
        pending_mass += step.multipliers;
        traj.steps_taken = k + 1;

        // Face hits are epsilon-approximations of sigma_i on the state grid.
        // The implicit step keeps a singular gap above sqrt(dt*gamma), so
        // resolving hits at hit_eps needs dt below hit_eps^2 / gamma.
        bool any_active = false;
        int active_count = 0;
        for (int i = 0; i < m; ++i) {
            const double g = gaps[i];
            if (g < traj.min_gaps[i]) traj.min_gaps[i] = g;
            if (g <= config.hit_eps) {
                any_active = true;
                ++active_count;
            }
            const BarrierPotential& p = model.potential_for_face(i);
            const double slope =
                g > 0 ? p.derivative(g) : p.derivative_limit_at_zero();
            traj.drift_integral[i] += dtk * std::abs(slope);
        }
        if (any_active)
            for (int i = 0; i < m; ++i)
                if (gaps[i] <= config.hit_eps && !traj.face_hits[i])
                    traj.face_hits[i] = FaceHit{t, active_count == 1};

        for (int s = 0; s < n_subsets; ++s) {
            const double dist = subset_distance(s, x);
            if (dist < traj.min_subset_distance[s])
                traj.min_subset_distance[s] = dist;
            if (dist <= config.edge_eps && !traj.subset_hits[s])
                traj.subset_hits[s] = t;
        }

        const bool last = (k + 1 == n_steps);
        const bool escaped = x.norm() >= config.escape_radius;
        if (keep_records &&
            (last || escaped ||
             (config.record_stride > 0 && (k + 1) % config.record_stride == 0))) {
            StepRecord rec;
            rec.t = t;
            rec.x = x;
            rec.brownian = dB;
            rec.local_time_increment = pending_mass;  // mass since last record
            rec.drift_magnitude = drift_magnitude_at(model, gaps);
            traj.records.push_back(std::move(rec));
            pending_mass.setZero();
        }
        if (escaped) {
            termination = Termination::Escape;
            break;
        }
    }

    traj.terminal_state = x;
    traj.terminal_time = t;
    traj.termination = termination;
    return traj;
}

}  // namespace chamber
