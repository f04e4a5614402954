#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/potentials.hpp"

namespace chamber {

// A complete simulation target: domain, per-face barrier potentials, a
// strictly interior canonical start point and the edge sets to monitor.
class PolyhedralModel {
  public:
    PolyhedralModel(std::string name, PolyhedralDomain domain,
                    std::vector<PotentialPtr> potentials, Vector initial_point,
                    std::vector<FaceSubset> monitored_subsets = {});

    const std::string& name() const { return name_; }
    const PolyhedralDomain& domain() const { return domain_; }
    int dimension() const { return domain_.dimension(); }
    int num_faces() const { return domain_.num_faces(); }
    const Vector& initial_point() const { return initial_point_; }
    const std::vector<FaceSubset>& monitored_subsets() const {
        return monitored_;
    }
    const BarrierPotential& potential_for_face(int i) const;
    const std::vector<PotentialPtr>& potentials() const { return potentials_; }

    // Cached K_i-nonemptiness per face (see PolyhedralDomain::face_exposed).
    bool face_exposed(int i) const { return exposed_.at(i); }

    // -grad Phi(x) = -sum_i n_i phi_i'(gap_i); requires gap > 0 on every
    // face with a singular derivative at 0 (DomainEval otherwise).
    Vector drift(const Vector& x) const;

    PolyhedralModel with_monitored(std::vector<FaceSubset> monitored) const;

  private:
    std::string name_;
    PolyhedralDomain domain_;
    std::vector<PotentialPtr> potentials_;
    Vector initial_point_;
    std::vector<FaceSubset> monitored_;
    std::vector<bool> exposed_;
};

// -- model zoo --------------------------------------------------------------

// n ordered Brownian particles with nearest-neighbor repulsion phi: faces
// (e_{i+1} - e_i)/sqrt(2) carrying phi(sqrt(2) u); start 0, 1, ..., n-1.
PolyhedralModel build_rost_vares(int n, PotentialPtr phi);

// Square roots of Wishart eigenvalues: domain {0 < r_1 < ... < r_n} plus the
// redundant sum walls, log barriers with gamma (delta-n)/2 (axis) and 1/2
// (difference and sum walls).  Requires delta >= n.
PolyhedralModel build_wishart_radii(int n, double delta);

// Circular particles X_1 <= ... <= X_n <= X_1 + 2*pi with log-sin repulsion:
// direct faces (e_i - e_j)/sqrt(2) (i > j) at offset 0 and wrap-around faces
// (e_i - e_j)/sqrt(2) (i < j) at offset -pi*sqrt(2), all TrigLogSin(gamma).
PolyhedralModel build_trigonometric(int n, double gamma);

// Ordered particles with log-sinh repulsion on every pair difference.
PolyhedralModel build_hyperbolic(int n, double gamma);

struct CustomFaceSpec {
    Vector normal;
    double offset = 0.0;
    PotentialPtr potential;
    std::string label;
};

PolyhedralModel build_custom(std::string name, int dimension,
                             std::vector<CustomFaceSpec> faces, Vector initial,
                             std::vector<FaceSubset> monitored = {},
                             bool normalize_normals = false);

// Single half-line wall at 0 with the given barrier: the one-dimensional
// reference model.
PolyhedralModel build_half_line(PotentialPtr phi, double x0);

}  // namespace chamber
