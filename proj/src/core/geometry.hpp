#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace chamber {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// One half-space constraint x.n >= a with a unit normal, bound to a barrier
// potential by id.
struct Face {
    Vector normal;
    double offset = 0.0;
    int potential_id = -1;
    std::string label;
};

// Nonempty, deduplicated, sorted set of face indices (0-based).
struct FaceSubset {
    std::vector<int> indices;

    explicit FaceSubset(std::vector<int> idx);
    void check_range(int num_faces) const;
};

struct ProjectionResult {
    Vector point;
    Vector multipliers;   // one per face, >= 0, displacement = N^T * multipliers
    int iterations = 0;
    bool degenerate = false;  // active normals linearly dependent: the
                              // per-face split of the multipliers is non-unique
};

// Convex polyhedral domain D = {x : x.n_i > a_i for all i}.  Immutable after
// construction; construction verifies unit normals, pairwise-distinct normals
// and a nonempty interior (margin > 1e-9 found by a bounded ascent scheme).
class PolyhedralDomain {
  public:
    PolyhedralDomain(int dimension, std::vector<Face> faces);

    int dimension() const { return dim_; }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    const std::vector<Face>& faces() const { return faces_; }
    const Face& face(int i) const;

    // Interior margin certificate found at construction.
    double interior_margin() const { return margin_; }
    const Vector& interior_point() const { return interior_point_; }

    // Signed gap U_i = x.n_i - a_i (negative for infeasible x).
    double gap(const Vector& x, int i) const;
    void gaps(const Vector& x, Vector& out) const;
    Vector gaps(const Vector& x) const;

    // { i : gap(x, i) <= eps }.
    std::vector<int> active_set(const Vector& x, double eps) const;

    // Euclidean projection onto the closure of D (dual active-set method on
    // the nonnegative least-squares problem).
    ProjectionResult project(const Vector& x) const;

    // Distance from x to H_J = {z : z.n_j = a_j for all j in J}; throws
    // ErrorCode::EmptyIntersection when the constraints are inconsistent.
    double subset_distance(const Vector& x, const FaceSubset& J) const;
    Vector subset_project(const Vector& x, const FaceSubset& J) const;

    // Min-norm corrector onto H_J: maps the residual N_J x - a_J to the
    // displacement x - proj_{H_J}(x).  Throws when H_J is empty.
    Matrix subset_corrector(const FaceSubset& J) const;

    // True when the face hyperplane meets the closure of D on a set where no
    // other face is active, i.e. K_i = {x : gap_i = 0, gap_j > 0 for j != i}
    // is nonempty.  Faces failing this touch the domain only on edges.
    bool face_exposed(int i) const;

  private:
    void check_point(const Vector& x) const;
    void find_interior();

    int dim_;
    std::vector<Face> faces_;
    double margin_ = 0.0;
    Vector interior_point_;
};

// Maximize min_i over the given gap functions (concave piecewise-linear
// ascent with backtracking), optionally constrained to a hyperplane
// {x : x.n = a}.  Used for the interior certificate and face exposure tests.
// The objective is capped at `cap` so unbounded cones terminate.
double max_min_gap(const std::vector<Face>& faces, Vector& x, double cap,
                   const Vector* plane_normal = nullptr,
                   double plane_offset = 0.0);

}  // namespace chamber
