#include "core/potentials.hpp"

#include <cmath>

namespace chamber {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;

void require_positive(double v, const char* name) {
    if (!(v > 0))
        throw Error(ErrorCode::InvalidArgument,
                    std::string(name) + " must be > 0");
}
}  // namespace

LogBarrier::LogBarrier(double gamma) : gamma_(gamma) {
    require_positive(gamma, "gamma");
}

double LogBarrier::value(double u) const { return -gamma_ * std::log(u); }

double LogBarrier::derivative(double u) const { return -gamma_ / u; }

Prox1dResult LogBarrier::closed_form_prox(double z, double tau) const {
    // Positive root of y^2 - z y - tau*gamma = 0.
    const double disc = z * z + 4.0 * tau * gamma_;
    return {0.5 * (z + std::sqrt(disc)), 0.0};
}

ShiftedLog::ShiftedLog(double gamma, double c) : gamma_(gamma), c_(c) {
    require_positive(gamma, "gamma");
    require_positive(c, "c");
}

double ShiftedLog::value(double u) const { return -gamma_ * std::log(u + c_); }

double ShiftedLog::derivative(double u) const { return -gamma_ / (u + c_); }

double ShiftedLog::value_at_zero() const { return -gamma_ * std::log(c_); }

double ShiftedLog::derivative_limit_at_zero() const { return -gamma_ / c_; }

Prox1dResult ShiftedLog::closed_form_prox(double z, double tau) const {
    if (z <= -tau * gamma_ / c_) return {0.0, -tau * gamma_ / c_ - z};
    // Positive root of y^2 + (c - z) y - (c z + tau*gamma) = 0.
    const double b = c_ - z;
    const double disc = b * b + 4.0 * (c_ * z + tau * gamma_);
    return {0.5 * (-b + std::sqrt(disc)), 0.0};
}

TrigLogSin::TrigLogSin(double gamma) : gamma_(gamma) {
    require_positive(gamma, "gamma");
}

double TrigLogSin::upper_limit() const { return M_PI * kSqrt2; }

double TrigLogSin::value(double u) const {
    if (u >= upper_limit()) return kInf;
    return -gamma_ * std::log(std::sin(u / kSqrt2));
}

double TrigLogSin::derivative(double u) const {
    if (u >= upper_limit())
        throw Error(ErrorCode::DomainEval,
                    "trig_log_sin derivative beyond the period");
    return -gamma_ / kSqrt2 * (std::cos(u / kSqrt2) / std::sin(u / kSqrt2));
}

HyperbolicLogSinh::HyperbolicLogSinh(double gamma) : gamma_(gamma) {
    require_positive(gamma, "gamma");
}

double HyperbolicLogSinh::value(double u) const {
    // log(sinh(w)) = w + log1p(-exp(-2w)) - log(2): stable for large w.
    const double w = kSqrt2 * u;
    return -gamma_ * (w + std::log1p(-std::exp(-2.0 * w)) - std::log(2.0));
}

double HyperbolicLogSinh::derivative(double u) const {
    return -gamma_ * kSqrt2 / std::tanh(kSqrt2 * u);
}

ScaledArgument::ScaledArgument(PotentialPtr inner, double scale)
    : inner_(std::move(inner)), scale_(scale) {
    if (!inner_) throw Error(ErrorCode::InvalidArgument, "null inner potential");
    require_positive(scale, "scale");
}

double ScaledArgument::value(double u) const { return inner_->value(scale_ * u); }

double ScaledArgument::derivative(double u) const {
    return scale_ * inner_->derivative(scale_ * u);
}

double ScaledArgument::value_at_zero() const { return inner_->value_at_zero(); }

double ScaledArgument::derivative_limit_at_zero() const {
    return scale_ * inner_->derivative_limit_at_zero();
}

std::optional<double> ScaledArgument::zero_exponent() const {
    // -g*log(s*u) = -g*log(u) + const: the exponent survives rescaling.
    return inner_->zero_exponent();
}

double ScaledArgument::upper_limit() const {
    return inner_->upper_limit() / scale_;
}

bool ScaledArgument::has_closed_form_prox() const {
    return inner_->has_closed_form_prox();
}

Prox1dResult ScaledArgument::closed_form_prox(double z, double tau) const {
    // min_y (y-z)^2/2 + tau*inner(s*y) maps to the inner prox at (s*z, s^2*tau).
    const Prox1dResult r =
        inner_->closed_form_prox(scale_ * z, scale_ * scale_ * tau);
    return {r.y / scale_, r.multiplier / scale_};
}

HintWithheld::HintWithheld(PotentialPtr inner) : inner_(std::move(inner)) {
    if (!inner_) throw Error(ErrorCode::InvalidArgument, "null inner potential");
}

double eval(const BarrierPotential& p, double u) {
    if (u < 0)
        throw Error(ErrorCode::DomainEval, "potential evaluated at u < 0");
    if (u == 0) return p.value_at_zero();
    if (u >= p.upper_limit()) return kInf;
    return p.value(u);
}

double deriv(const BarrierPotential& p, double u) {
    if (!(u > 0))
        throw Error(ErrorCode::DomainEval, "derivative requires u > 0");
    return p.derivative(u);
}

Prox1dResult prox1d(const BarrierPotential& p, double z, double tau) {
    if (!(tau > 0)) throw Error(ErrorCode::InvalidArgument, "tau must be > 0");
    if (p.has_closed_form_prox()) return p.closed_form_prox(z, tau);
    return prox1d_generic(p, z, tau);
}

// The optimality residual r(y) = y + tau*phi'(y) - z is strictly increasing
// (slope >= 1 by convexity of phi), so a sign-bracketing search plus
// secant steps safeguarded by bisection converges without phi''.
Prox1dResult prox1d_generic(const BarrierPotential& p, double z, double tau) {
    if (!(tau > 0)) throw Error(ErrorCode::InvalidArgument, "tau must be > 0");

    const double upper = p.upper_limit();
    const double dlim0 = p.derivative_limit_at_zero();
    const double rtol = 1e-13 * (1.0 + std::abs(z));

    if (std::isfinite(dlim0)) {
        // y = 0 is optimal iff the one-sided residual there is nonnegative.
        const double r0 = tau * dlim0 - z;
        if (r0 >= 0) return {0.0, r0};
    }

    auto residual = [&](double y) { return y + tau * p.derivative(y) - z; };

    // Bracket: r(lo) < 0 < r(hi).
    double lo = z > 0 ? z : 1.0;
    if (std::isfinite(upper)) lo = std::min(lo, 0.5 * upper);
    int guard = 0;
    while (residual(lo) >= 0) {
        lo *= 0.5;
        if (++guard > 4000 || lo < 1e-300)
            throw Error(ErrorCode::SolverFailure, "prox1d: no lower bracket");
    }
    double hi;
    if (std::isfinite(upper)) {
        hi = 0.5 * (lo + upper);
        guard = 0;
        while (residual(hi) <= 0) {
            hi = 0.5 * (hi + upper);
            if (++guard > 4000)
                throw Error(ErrorCode::SolverFailure, "prox1d: no upper bracket");
        }
    } else {
        hi = std::max(2.0 * lo, std::abs(z) + 1.0);
        guard = 0;
        while (residual(hi) <= 0) {
            hi *= 2.0;
            if (++guard > 4000 || !std::isfinite(hi))
                throw Error(ErrorCode::SolverFailure, "prox1d: no upper bracket");
        }
    }

    double flo = residual(lo);
    double fhi = residual(hi);
    double y = lo;
    for (int iter = 0; iter < 200; ++iter) {
        // Secant candidate, safeguarded into the bracket interior.
        double cand = lo - flo * (hi - lo) / (fhi - flo);
        const double width = hi - lo;
        if (!(cand > lo + 1e-3 * width) || !(cand < hi - 1e-3 * width))
            cand = 0.5 * (lo + hi);
        const double fc = residual(cand);
        y = cand;
        if (std::abs(fc) <= rtol) return {y, 0.0};
        if (fc < 0) {
            lo = cand;
            flo = fc;
        } else {
            hi = cand;
            fhi = fc;
        }
        if (hi - lo <= 1e-16 * (1.0 + std::abs(lo)))
            return {std::abs(flo) < std::abs(fhi) ? lo : hi, 0.0};
    }
    throw Error(ErrorCode::SolverFailure, "prox1d: root finder stalled");
}

}  // namespace chamber
