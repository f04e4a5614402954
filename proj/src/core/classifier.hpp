#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/models.hpp"
#include "core/potentials.hpp"

namespace chamber {

enum class BoundaryClass { Weak, Middle, Strong };

const char* to_string(BoundaryClass c);

struct ClassDiagnostics {
    std::optional<double> declared_exponent;
    std::optional<double> regressed_exponent;
    std::string method;  // "finite_at_zero" | "declared_exponent" | "regressed_exponent"
};

struct Classification {
    BoundaryClass cls;
    ClassDiagnostics diag;
};

// Scale function p(x) = int_1^x exp{2(phi(u) - phi(1))} du with memoized
// quadrature nodes; p(1) = 0 and p is strictly increasing.
class ScaleFunction {
  public:
    explicit ScaleFunction(PotentialPtr potential);
    double operator()(double x) const;
    const PotentialPtr& potential() const { return potential_; }

  private:
    PotentialPtr potential_;
    mutable std::vector<std::pair<double, double>> cache_;  // sorted (x, p(x))
};

// Adaptive quadrature of the scale integrand, relative tolerance 1e-8.
double scale(const BarrierPotential& p, double x);

// Weak <=> phi(0) < inf; otherwise Strong iff the zero exponent gamma
// (declared, else regressed on u in [1e-10, 1e-2]) satisfies gamma >= 1/2.
// Regressed exponents within 0.02 of the critical value throw
// ErrorCode::Indeterminate instead of guessing.
Classification classify(const BarrierPotential& p);

// Least-squares estimate of gamma from 2*phi(u) against log u.
double regress_zero_exponent(const BarrierPotential& p);

struct FaceClassification {
    int face_index;
    std::string label;
    std::optional<Classification> result;  // empty on indeterminate faces
    std::string error;                     // message when indeterminate
    std::string prediction;
    bool exposed = true;  // false: hyperplane meets the closure only on edges
};

std::vector<FaceClassification> classify_model(const PolyhedralModel& model);

}  // namespace chamber
