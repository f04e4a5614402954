#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chamber {

namespace {

constexpr double kUnitNormTol = 1e-12;
constexpr double kMarginRequired = 1e-9;

std::string face_name(const Face& f, int i) {
    return f.label.empty() ? "face " + std::to_string(i) : f.label;
}

}  // namespace

FaceSubset::FaceSubset(std::vector<int> idx) : indices(std::move(idx)) {
    if (indices.empty())
        throw Error(ErrorCode::InvalidArgument, "face subset must be nonempty");
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
}

void FaceSubset::check_range(int num_faces) const {
    for (int i : indices)
        if (i < 0 || i >= num_faces)
            throw Error(ErrorCode::InvalidArgument,
                        "face index " + std::to_string(i) + " out of range");
}

PolyhedralDomain::PolyhedralDomain(int dimension, std::vector<Face> faces)
    : dim_(dimension), faces_(std::move(faces)) {
    if (dim_ < 1)
        throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
    if (faces_.empty())
        throw Error(ErrorCode::InvalidArgument, "domain needs at least one face");
    for (size_t i = 0; i < faces_.size(); ++i) {
        const Face& f = faces_[i];
        if (f.normal.size() != dim_)
            throw Error(ErrorCode::InvalidArgument,
                        face_name(f, static_cast<int>(i)) +
                            ": normal dimension mismatch");
        if (std::abs(f.normal.norm() - 1.0) > kUnitNormTol)
            throw Error(ErrorCode::InvalidArgument,
                        face_name(f, static_cast<int>(i)) +
                            ": normal is not a unit vector");
    }
    for (size_t i = 0; i < faces_.size(); ++i)
        for (size_t j = i + 1; j < faces_.size(); ++j)
            if ((faces_[i].normal - faces_[j].normal).norm() < 1e-10)
                throw Error(ErrorCode::InvalidArgument,
                            "faces " + face_name(faces_[i], static_cast<int>(i)) +
                                " and " + face_name(faces_[j], static_cast<int>(j)) +
                                " have identical normals");
    find_interior();
}

const Face& PolyhedralDomain::face(int i) const {
    if (i < 0 || i >= num_faces())
        throw Error(ErrorCode::InvalidArgument,
                    "face index " + std::to_string(i) + " out of range");
    return faces_[i];
}

void PolyhedralDomain::check_point(const Vector& x) const {
    if (x.size() != dim_)
        throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
}

double PolyhedralDomain::gap(const Vector& x, int i) const {
    check_point(x);
    return face(i).normal.dot(x) - faces_[i].offset;
}

void PolyhedralDomain::gaps(const Vector& x, Vector& out) const {
    out.resize(num_faces());
    for (int i = 0; i < num_faces(); ++i)
        out[i] = faces_[i].normal.dot(x) - faces_[i].offset;
}

Vector PolyhedralDomain::gaps(const Vector& x) const {
    check_point(x);
    Vector out;
    gaps(x, out);
    return out;
}

std::vector<int> PolyhedralDomain::active_set(const Vector& x, double eps) const {
    check_point(x);
    if (eps < 0)
        throw Error(ErrorCode::InvalidArgument, "active_set eps must be >= 0");
    std::vector<int> active;
    for (int i = 0; i < num_faces(); ++i)
        if (faces_[i].normal.dot(x) - faces_[i].offset <= eps) active.push_back(i);
    return active;
}

// Dual active-set method for min |z - x|^2 / 2 s.t. N z >= a.  With
// z = x + N^T lambda the KKT system is the bound-constrained quadratic
// program min_{lambda >= 0} lambda^T N N^T lambda / 2 + lambda^T (N x - a),
// solved Lawson-Hanson style.  Exact for polyhedra, finite termination.
ProjectionResult PolyhedralDomain::project(const Vector& x) const {
    check_point(x);
    const int m = num_faces();
    ProjectionResult result;
    result.multipliers = Vector::Zero(m);

    Vector g = gaps(x);
    const double scale = 1.0 + x.norm();
    const double tol = 1e-13 * scale;
    if (g.minCoeff() >= -tol) {  // already feasible
        result.point = x;
        return result;
    }

    std::vector<int> passive;
    Vector lambda = Vector::Zero(m);
    Vector z = x;
    const int max_outer = 50 * (m + 2);

    auto rebuild = [&](const std::vector<int>& P) -> Vector {
        const int p = static_cast<int>(P.size());
        Matrix G(p, p);
        Vector rhs(p);
        for (int r = 0; r < p; ++r) {
            rhs[r] = faces_[P[r]].offset - faces_[P[r]].normal.dot(x);
            for (int c = 0; c < p; ++c)
                G(r, c) = faces_[P[r]].normal.dot(faces_[P[c]].normal);
        }
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(G);
        if (cod.rank() < p) result.degenerate = true;
        return cod.solve(rhs);
    };

    for (int outer = 0; outer < max_outer; ++outer) {
        ++result.iterations;
        // Most violated constraint outside the passive set.
        int worst = -1;
        double worst_gap = -tol;
        for (int i = 0; i < m; ++i) {
            if (std::find(passive.begin(), passive.end(), i) != passive.end())
                continue;
            const double gi = faces_[i].normal.dot(z) - faces_[i].offset;
            if (gi < worst_gap) {
                worst_gap = gi;
                worst = i;
            }
        }
        if (worst < 0) {  // KKT satisfied
            result.point = z;
            for (size_t r = 0; r < passive.size(); ++r)
                result.multipliers[passive[r]] = lambda[passive[r]];
            return result;
        }
        passive.push_back(worst);

        for (int inner = 0; inner < max_outer; ++inner) {
            const Vector trial = rebuild(passive);
            bool all_nonneg = true;
            for (int r = 0; r < static_cast<int>(passive.size()); ++r)
                if (trial[r] < -tol) all_nonneg = false;
            if (all_nonneg) {
                for (int r = 0; r < static_cast<int>(passive.size()); ++r)
                    lambda[passive[r]] = std::max(trial[r], 0.0);
                break;
            }
            // Step toward the trial until the first passive multiplier hits 0.
            double alpha = 1.0;
            int drop = -1;
            for (int r = 0; r < static_cast<int>(passive.size()); ++r) {
                const double cur = lambda[passive[r]];
                if (trial[r] < -tol && cur - trial[r] > 0) {
                    const double step = cur / (cur - trial[r]);
                    if (step < alpha) {
                        alpha = step;
                        drop = r;
                    }
                }
            }
            for (int r = 0; r < static_cast<int>(passive.size()); ++r) {
                const int idx = passive[r];
                lambda[idx] = lambda[idx] + alpha * (trial[r] - lambda[idx]);
            }
            if (drop < 0) break;
            lambda[passive[drop]] = 0.0;
            passive.erase(passive.begin() + drop);
        }

        z = x;
        for (int idx : passive) z += lambda[idx] * faces_[idx].normal;
    }
    throw Error(ErrorCode::SolverFailure,
                "projection active-set method did not converge");
}

Matrix PolyhedralDomain::subset_corrector(const FaceSubset& J) const {
    J.check_range(num_faces());
    const int p = static_cast<int>(J.indices.size());
    Matrix N(p, dim_);
    Vector a(p);
    for (int r = 0; r < p; ++r) {
        N.row(r) = faces_[J.indices[r]].normal.transpose();
        a[r] = faces_[J.indices[r]].offset;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(N);
    const Matrix pinv = cod.pseudoInverse();  // d x p

    // H_J nonempty iff N z = a is consistent: check with the min-norm solve.
    const Vector z0 = pinv * a;
    if ((N * z0 - a).norm() > 1e-9 * (1.0 + a.norm()))
        throw Error(ErrorCode::EmptyIntersection,
                    "face subset has empty intersection H_J");
    return pinv;
}

double PolyhedralDomain::subset_distance(const Vector& x, const FaceSubset& J) const {
    check_point(x);
    const Matrix pinv = subset_corrector(J);
    const int p = static_cast<int>(J.indices.size());
    Vector r(p);
    for (int k = 0; k < p; ++k)
        r[k] = faces_[J.indices[k]].normal.dot(x) - faces_[J.indices[k]].offset;
    return (pinv * r).norm();
}

Vector PolyhedralDomain::subset_project(const Vector& x, const FaceSubset& J) const {
    check_point(x);
    const Matrix pinv = subset_corrector(J);
    const int p = static_cast<int>(J.indices.size());
    Vector r(p);
    for (int k = 0; k < p; ++k)
        r[k] = faces_[J.indices[k]].normal.dot(x) - faces_[J.indices[k]].offset;
    return x - pinv * r;
}

double max_min_gap(const std::vector<Face>& faces, Vector& x, double cap,
                   const Vector* plane_normal, double plane_offset) {
    const int m = static_cast<int>(faces.size());

    auto restrict_to_plane = [&](Vector& v) {
        if (plane_normal) v -= (plane_normal->dot(v)) * (*plane_normal);
    };
    if (plane_normal) {
        // Move the start onto the hyperplane.
        x -= (plane_normal->dot(x) - plane_offset) * (*plane_normal);
    }

    auto objective = [&](const Vector& p) {
        double f = cap;
        for (const Face& face : faces)
            f = std::min(f, face.normal.dot(p) - face.offset);
        return f;
    };

    double f = objective(x);
    double step0 = 1.0;
    const int max_iters = 200 * (m + static_cast<int>(x.size()) + 2);
    for (int iter = 0; iter < max_iters && f < cap; ++iter) {
        // Candidate ascent directions: steepest single face, then averages of
        // near-active normals at widening tolerances.
        std::vector<Vector> candidates;
        int argmin = 0;
        double fmin = faces[0].normal.dot(x) - faces[0].offset;
        for (int i = 1; i < m; ++i) {
            const double gi = faces[i].normal.dot(x) - faces[i].offset;
            if (gi < fmin) {
                fmin = gi;
                argmin = i;
            }
        }
        candidates.push_back(faces[argmin].normal);
        for (double tol : {1e-9, 1e-6, 1e-3, 1e-1}) {
            Vector avg = Vector::Zero(x.size());
            int count = 0;
            for (const Face& face : faces)
                if (face.normal.dot(x) - face.offset <= fmin + tol) {
                    avg += face.normal;
                    ++count;
                }
            if (count > 1) candidates.push_back(avg / count);
        }

        bool improved = false;
        for (Vector dir : candidates) {
            restrict_to_plane(dir);
            const double norm = dir.norm();
            if (norm < 1e-14) continue;
            dir /= norm;
            double step = step0;
            while (step > 1e-14) {
                const double trial = objective(x + step * dir);
                if (trial > f + 1e-16) {
                    x += step * dir;
                    f = trial;
                    step0 = std::min(2.0 * step, 4.0);
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (improved) break;
        }
        if (!improved) break;
    }
    return f;
}

void PolyhedralDomain::find_interior() {
    // Start from the least-squares center of the face hyperplanes.
    Matrix N(num_faces(), dim_);
    Vector a(num_faces());
    for (int i = 0; i < num_faces(); ++i) {
        N.row(i) = faces_[i].normal.transpose();
        a[i] = faces_[i].offset;
    }
    Vector x = N.completeOrthogonalDecomposition().solve(a);
    margin_ = max_min_gap(faces_, x, 1.0);
    interior_point_ = x;
    if (!(margin_ > kMarginRequired))
        throw Error(ErrorCode::Infeasible,
                    "polyhedral domain has empty interior (margin " +
                        std::to_string(margin_) + ")");
}

bool PolyhedralDomain::face_exposed(int i) const {
    const Face& target = face(i);
    std::vector<Face> others;
    for (int j = 0; j < num_faces(); ++j)
        if (j != i) others.push_back(faces_[j]);
    if (others.empty()) return true;
    Vector x = interior_point_;
    const double margin =
        max_min_gap(others, x, 1.0, &target.normal, target.offset);
    return margin > 1e-6;
}

}  // namespace chamber
