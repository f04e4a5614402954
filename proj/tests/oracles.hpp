#pragma once

// Independent test oracles: brute-force implementations kept deliberately
// separate from the algorithms they check.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "core/geometry.hpp"
#include "core/potentials.hpp"

namespace oracles {

using chamber::Face;
using chamber::Matrix;
using chamber::Vector;

// Exhaustive active-set projection: enumerate every face subset, project onto
// the affine intersection, keep feasible candidates, return the closest.
// Exact for small m; the production dual active-set method is checked
// against it.
inline Vector brute_force_project(const std::vector<Face>& faces,
                                  const Vector& x, double feas_tol = 1e-9) {
    const int m = static_cast<int>(faces.size());
    Vector best = x;
    double best_dist = std::numeric_limits<double>::infinity();

    auto feasible = [&](const Vector& z) {
        for (const Face& f : faces)
            if (f.normal.dot(z) - f.offset < -feas_tol) return false;
        return true;
    };
    if (feasible(x)) return x;

    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) subset.push_back(i);
        Matrix N(static_cast<int>(subset.size()), x.size());
        Vector a(static_cast<int>(subset.size()));
        for (size_t r = 0; r < subset.size(); ++r) {
            N.row(static_cast<int>(r)) = faces[subset[r]].normal.transpose();
            a[static_cast<int>(r)] = faces[subset[r]].offset;
        }
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(N);
        const Vector correction = cod.solve(N * x - a);
        if ((N * (x - correction) - a).norm() > 1e-8 * (1.0 + a.norm()))
            continue;  // inconsistent subset
        const Vector z = x - correction;
        if (!feasible(z)) continue;
        const double dist = (z - x).norm();
        if (dist < best_dist) {
            best_dist = dist;
            best = z;
        }
    }
    return best;
}

// Least-squares decomposition of a displacement over the active normals with
// nonnegative coefficients, by subset enumeration; returns the smallest
// residual achieved.
inline double nonneg_cone_residual(const Vector& displacement,
                                   const std::vector<Vector>& normals) {
    const int m = static_cast<int>(normals.size());
    if (m == 0) return displacement.norm();
    double best = displacement.norm();
    for (int mask = 1; mask < (1 << m); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < m; ++i)
            if (mask & (1 << i)) subset.push_back(i);
        Matrix N(displacement.size(), static_cast<int>(subset.size()));
        for (size_t c = 0; c < subset.size(); ++c)
            N.col(static_cast<int>(c)) = normals[subset[c]];
        const Vector coeff =
            N.completeOrthogonalDecomposition().solve(displacement);
        if (coeff.minCoeff() < -1e-9) continue;
        best = std::min(best, (N * coeff - displacement).norm());
    }
    return best;
}

// Dense grid search plus golden-section refinement for
// argmin_{y >= 0} (y - z)^2 / 2 + tau * phi(y).
inline double grid_prox_oracle(const chamber::BarrierPotential& p, double z,
                               double tau) {
    const double upper = p.upper_limit();
    double hi = std::max(z, 0.0) + 1.0 + 3.0 * std::sqrt(tau);
    if (std::isfinite(upper)) hi = std::min(hi, upper * (1.0 - 1e-12));

    auto objective = [&](double y) {
        const double phi = chamber::eval(p, y);
        if (!std::isfinite(phi)) return std::numeric_limits<double>::infinity();
        return 0.5 * (y - z) * (y - z) + tau * phi;
    };

    const int kGrid = 4000;
    int best_idx = 0;
    double best_val = objective(0.0);
    for (int i = 1; i <= kGrid; ++i) {
        const double y = hi * i / kGrid;
        const double v = objective(y);
        if (v < best_val) {
            best_val = v;
            best_idx = i;
        }
    }
    double lo_b = hi * std::max(0, best_idx - 1) / kGrid;
    double hi_b = hi * std::min(kGrid, best_idx + 1) / kGrid;

    const double phi_ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi_b - phi_ratio * (hi_b - lo_b);
    double d = lo_b + phi_ratio * (hi_b - lo_b);
    double fc = objective(c), fd = objective(d);
    for (int iter = 0; iter < 300 && hi_b - lo_b > 1e-14 * (1.0 + hi_b); ++iter) {
        if (fc < fd) {
            hi_b = d;
            d = c;
            fd = fc;
            c = hi_b - phi_ratio * (hi_b - lo_b);
            fc = objective(c);
        } else {
            lo_b = c;
            c = d;
            fc = fd;
            d = lo_b + phi_ratio * (hi_b - lo_b);
            fd = objective(d);
        }
    }
    const double mid = 0.5 * (lo_b + hi_b);
    return objective(0.0) < objective(mid) ? 0.0 : mid;
}

// Closed form of the scale integral for phi = -gamma log u:
// int_1^x u^{-2 gamma} du.
inline double scale_log_closed_form(double gamma, double x) {
    const double e = 1.0 - 2.0 * gamma;
    if (std::abs(e) < 1e-14) return std::log(x);
    return (std::pow(x, e) - 1.0) / e;
}

// Central finite-difference gradient.
inline Vector finite_difference_gradient(
    const std::function<double(const Vector&)>& f, const Vector& x,
    double h = 1e-6) {
    Vector g(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Vector xp = x, xm = x;
        const double step = h * (1.0 + std::abs(x[i]));
        xp[i] += step;
        xm[i] -= step;
        g[i] = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

// Hand-coded drift formulas for the particle systems, written directly from
// the per-coordinate equations of motion rather than the face decomposition.

// Nearest-neighbor chain: drift_1 = phi'(x2-x1), interior particles get
// phi'(right gap) - phi'(left gap), the last one -phi'(left gap).
inline Vector rost_vares_drift(const std::function<double(double)>& phi_deriv,
                               const Vector& x) {
    const int n = static_cast<int>(x.size());
    Vector d = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) d[i] += phi_deriv(x[i + 1] - x[i]);
        if (i > 0) d[i] -= phi_deriv(x[i] - x[i - 1]);
    }
    return d;
}

// Wishart radii: (delta-n)/(2 r_i) + (1/2) sum_{j != i} (1/(r_i+r_j) +
// 1/(r_i-r_j)).
inline Vector wishart_drift(double delta, const Vector& r) {
    const int n = static_cast<int>(r.size());
    Vector d(n);
    for (int i = 0; i < n; ++i) {
        double v = 0.5 * (delta - n) / r[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            v += 0.5 * (1.0 / (r[i] + r[j]) + 1.0 / (r[i] - r[j]));
        }
        d[i] = v;
    }
    return d;
}

// Circular log-sin chain: gamma * sum_{k != j} cot((x_j - x_k) / 2).  The
// pair potential acts through both the direct and the wrap-around face, so
// the per-pair coefficient is twice the gamma/2 of the single-sum form.
inline Vector trig_drift(double gamma, const Vector& x) {
    const int n = static_cast<int>(x.size());
    Vector d = Vector::Zero(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            d[j] += gamma / std::tan(0.5 * (x[j] - x[k]));
        }
    return d;
}

// Hyperbolic chain: gamma * sum_{k != j} coth(x_j - x_k).
inline Vector hyperbolic_drift(double gamma, const Vector& x) {
    const int n = static_cast<int>(x.size());
    Vector d = Vector::Zero(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            d[j] += gamma / std::tanh(x[j] - x[k]);
        }
    return d;
}

// Radial Dunkl drift: sum over positive roots of k(alpha) alpha / (alpha.x).
inline Vector dunkl_drift(const std::vector<Vector>& positive_roots,
                          const std::vector<double>& k, const Vector& x) {
    Vector d = Vector::Zero(x.size());
    for (size_t i = 0; i < positive_roots.size(); ++i)
        d += k[i] * positive_roots[i] / positive_roots[i].dot(x);
    return d;
}

}  // namespace oracles
