#include "core/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace chamber {

const char* to_string(BoundaryClass c) {
    switch (c) {
        case BoundaryClass::Weak: return "weak";
        case BoundaryClass::Middle: return "middle";
        case BoundaryClass::Strong: return "strong";
    }
    return "?";
}

namespace {

constexpr double kCritical = 0.5;
constexpr double kNearCriticalBand = 0.02;

// Adaptive Simpson on f over [a, b], relative tolerance on the whole integral.
class AdaptiveSimpson {
  public:
    AdaptiveSimpson(const BarrierPotential& p, double shift)
        : p_(p), shift_(shift) {}

    double integrand(double u) const {
        const double g = 2.0 * (p_.value(u) - shift_);
        const double v = std::exp(g);
        if (!std::isfinite(v))
            throw Error(ErrorCode::Runtime,
                        "scale integrand overflows after log rescaling");
        return v;
    }

    double integrate(double a, double b, double rel_tol) {
        const double fa = integrand(a);
        const double fb = integrand(b);
        const double fm = integrand(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        return recurse(a, b, fa, fm, fb, whole,
                       rel_tol * std::max(std::abs(whole), 1e-300), 0);
    }

  private:
    double recurse(double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = integrand(lm);
        const double frm = integrand(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (depth >= 52)
            throw Error(ErrorCode::SolverFailure,
                        "scale quadrature exceeded refinement depth");
        if (std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    const BarrierPotential& p_;
    double shift_;
};

}  // namespace

double scale(const BarrierPotential& p, double x) {
    if (!(x > 0))
        throw Error(ErrorCode::InvalidArgument, "scale requires x > 0");
    if (x >= p.upper_limit())
        throw Error(ErrorCode::InvalidArgument,
                    "scale endpoint beyond the potential's domain");
    if (x == 1.0) return 0.0;
    const double shift = p.value(1.0);
    AdaptiveSimpson quad(p, shift);
    if (x > 1.0) return quad.integrate(1.0, x, 1e-8);
    return -quad.integrate(x, 1.0, 1e-8);
}

ScaleFunction::ScaleFunction(PotentialPtr potential)
    : potential_(std::move(potential)) {
    if (!potential_) throw Error(ErrorCode::InvalidArgument, "null potential");
}

double ScaleFunction::operator()(double x) const {
    auto it = std::lower_bound(cache_.begin(), cache_.end(),
                               std::make_pair(x, -kInf));
    if (it != cache_.end() && it->first == x) return it->second;
    const double v = scale(*potential_, x);
    cache_.insert(it, {x, v});
    return v;
}

double regress_zero_exponent(const BarrierPotential& p) {
    // 2*phi(u) ~ -2*gamma*log(u) + const near 0: slope of 2*phi against
    // log u on a log-spaced grid gives -2*gamma.
    constexpr int kPoints = 40;
    const double lo = std::log(1e-10), hi = std::log(1e-2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < kPoints; ++i) {
        const double lu = lo + (hi - lo) * i / (kPoints - 1);
        const double y = 2.0 * p.value(std::exp(lu));
        sx += lu;
        sy += y;
        sxx += lu * lu;
        sxy += lu * y;
    }
    const double slope =
        (kPoints * sxy - sx * sy) / (kPoints * sxx - sx * sx);
    return -0.5 * slope;
}

Classification classify(const BarrierPotential& p) {
    Classification out;
    if (std::isfinite(p.value_at_zero())) {
        out.cls = BoundaryClass::Weak;
        out.diag.method = "finite_at_zero";
        out.diag.declared_exponent = p.zero_exponent();
        return out;
    }
    // phi(0) = inf: divergence of int_{0+} exp(2 phi) ~ int u^{-2 gamma} is
    // decided by the exponent, never by raw quadrature.
    if (auto declared = p.zero_exponent()) {
        out.diag.declared_exponent = declared;
        out.diag.method = "declared_exponent";
        out.cls = *declared >= kCritical ? BoundaryClass::Strong
                                         : BoundaryClass::Middle;
        return out;
    }
    const double estimated = regress_zero_exponent(p);
    out.diag.regressed_exponent = estimated;
    out.diag.method = "regressed_exponent";
    if (std::abs(estimated - kCritical) < kNearCriticalBand)
        throw Error(ErrorCode::Indeterminate,
                    "near-critical zero exponent " + std::to_string(estimated) +
                        ": analytic hint required");
    out.cls = estimated >= kCritical ? BoundaryClass::Strong
                                     : BoundaryClass::Middle;
    return out;
}

std::vector<FaceClassification> classify_model(const PolyhedralModel& model) {
    std::vector<FaceClassification> rows;
    for (int i = 0; i < model.num_faces(); ++i) {
        FaceClassification row;
        row.face_index = i;
        row.label = model.domain().face(i).label;
        row.exposed = model.face_exposed(i);
        try {
            row.result = classify(model.potential_for_face(i));
            switch (row.result->cls) {
                case BoundaryClass::Weak:
                    row.prediction = "reachable with reflection";
                    break;
                case BoundaryClass::Middle:
                    row.prediction = "reachable, zero local time";
                    break;
                case BoundaryClass::Strong:
                    row.prediction = "face unreachable";
                    break;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Indeterminate) throw;
            row.error = e.what();
            row.prediction = "indeterminate";
        }
        if (!row.exposed)
            row.prediction +=
                " [wall meets the domain only on edges: unreachable "
                "regardless of the one-dimensional class]";
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace chamber
