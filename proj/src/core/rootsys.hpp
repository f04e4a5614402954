#pragma once

#include <string>
#include <vector>

#include "core/models.hpp"

namespace chamber {

enum class RootFamily { A, B, D, I2 };

RootFamily parse_root_family(const std::string& name);
const char* to_string(RootFamily family);

// Finite root system with a positive subsystem fixed by a witness vector, a
// simple subset and a reflection-invariant multiplicity function.
struct RootSystem {
    int ambient_dim = 0;
    std::vector<Vector> roots;
    std::vector<int> positive;      // indices into roots
    std::vector<int> simple;        // indices into roots, subset of positive
    std::vector<double> multiplicity;  // k per root
    Vector witness;                 // beta with R+ = {alpha : alpha.beta > 0}
    std::string name;
};

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> failures;

    void fail(std::string msg) {
        valid = false;
        failures.push_back(std::move(msg));
    }
};

// s_alpha(x) = x - 2 (alpha.x / |alpha|^2) alpha.
Vector reflect(const Vector& alpha, const Vector& x);

// Checks every axiom: {alpha,-alpha} closure on lines, s_alpha(R) = R,
// positivity against the witness, simple subset a basis spanning R+ with
// nonnegative coefficients, and multiplicity invariance by orbit enumeration.
ValidationReport validate(const RootSystem& rs);

// Standard families.  k_orbit_values has one entry per root-length orbit:
// one for A and D (and odd-m I2), two for B (long, short) and even-m I2.
RootSystem standard_root_system(RootFamily family, int rank_or_m,
                                const std::vector<double>& k_orbit_values);

// Indecomposability filter: alpha is simple iff it is not a positive
// combination of two other positive roots.
std::vector<int> simple_roots(const RootSystem& rs);

// Group the roots into reflection-group orbits (indices into rs.roots).
std::vector<std::vector<int>> root_orbits(const RootSystem& rs);

// Radial Dunkl model: one face per positive root (normal alpha/|alpha|,
// offset 0) carrying LogBarrier(k(alpha)), so that the drift equals
// sum_{alpha in R+} k(alpha) alpha / (alpha.x).  Requires k > 0 on R+.
PolyhedralModel dunkl_model(const RootSystem& rs);

}  // namespace chamber
