#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "core/error.hpp"

namespace chamber {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Prox1dResult {
    double y = 0.0;
    double multiplier = 0.0;  // > 0 only at y = 0, possible only when
                              // the derivative limit at 0+ is finite
};

// Scalar convex barrier on [0, inf): convex and lower semicontinuous, +inf
// on (-inf, 0), C^1 on the interior of its domain.  `zero_exponent` declares
// gamma with value(u) = -gamma*log(u) + O(1) near 0 when known analytically.
class BarrierPotential {
  public:
    virtual ~BarrierPotential() = default;

    virtual double value(double u) const = 0;       // u > 0
    virtual double derivative(double u) const = 0;  // 0 < u < upper_limit
    virtual double value_at_zero() const = 0;
    virtual double derivative_limit_at_zero() const = 0;
    virtual std::optional<double> zero_exponent() const { return std::nullopt; }
    virtual double upper_limit() const { return kInf; }

    virtual bool has_closed_form_prox() const { return false; }
    virtual Prox1dResult closed_form_prox(double /*z*/, double /*tau*/) const {
        throw Error(ErrorCode::InvalidArgument, "no closed-form prox");
    }

    // Serialization hooks for the config grammar.
    virtual std::string kind() const = 0;
    virtual std::map<std::string, double> params() const { return {}; }
};

using PotentialPtr = std::shared_ptr<const BarrierPotential>;

// phi == 0 on [0, inf): pure normal reflection (phi(0) = 0 < inf).
class ZeroPotential final : public BarrierPotential {
  public:
    double value(double) const override { return 0.0; }
    double derivative(double) const override { return 0.0; }
    double value_at_zero() const override { return 0.0; }
    double derivative_limit_at_zero() const override { return 0.0; }
    std::optional<double> zero_exponent() const override { return 0.0; }
    bool has_closed_form_prox() const override { return true; }
    Prox1dResult closed_form_prox(double z, double) const override {
        return z >= 0 ? Prox1dResult{z, 0.0} : Prox1dResult{0.0, -z};
    }
    std::string kind() const override { return "zero"; }
};

// phi(u) = -gamma * log(u).
class LogBarrier final : public BarrierPotential {
  public:
    explicit LogBarrier(double gamma);
    double value(double u) const override;
    double derivative(double u) const override;
    double value_at_zero() const override { return kInf; }
    double derivative_limit_at_zero() const override { return -kInf; }
    std::optional<double> zero_exponent() const override { return gamma_; }
    bool has_closed_form_prox() const override { return true; }
    Prox1dResult closed_form_prox(double z, double tau) const override;
    std::string kind() const override { return "log"; }
    std::map<std::string, double> params() const override {
        return {{"gamma", gamma_}};
    }
    double gamma() const { return gamma_; }

  private:
    double gamma_;
};

// phi(u) = -gamma * log(u + c), finite at 0.
class ShiftedLog final : public BarrierPotential {
  public:
    ShiftedLog(double gamma, double c);
    double value(double u) const override;
    double derivative(double u) const override;
    double value_at_zero() const override;
    double derivative_limit_at_zero() const override;
    std::optional<double> zero_exponent() const override { return 0.0; }
    bool has_closed_form_prox() const override { return true; }
    Prox1dResult closed_form_prox(double z, double tau) const override;
    std::string kind() const override { return "shifted_log"; }
    std::map<std::string, double> params() const override {
        return {{"gamma", gamma_}, {"c", c_}};
    }

  private:
    double gamma_, c_;
};

// phi(u) = -gamma * log(sin(u / sqrt(2))) on (0, pi*sqrt(2)), +inf beyond.
class TrigLogSin final : public BarrierPotential {
  public:
    explicit TrigLogSin(double gamma);
    double value(double u) const override;
    double derivative(double u) const override;
    double value_at_zero() const override { return kInf; }
    double derivative_limit_at_zero() const override { return -kInf; }
    std::optional<double> zero_exponent() const override { return gamma_; }
    double upper_limit() const override;
    std::string kind() const override { return "trig_log_sin"; }
    std::map<std::string, double> params() const override {
        return {{"gamma", gamma_}};
    }

  private:
    double gamma_;
};

// phi(u) = -gamma * log(sinh(sqrt(2) * u)).
class HyperbolicLogSinh final : public BarrierPotential {
  public:
    explicit HyperbolicLogSinh(double gamma);
    double value(double u) const override;
    double derivative(double u) const override;
    double value_at_zero() const override { return kInf; }
    double derivative_limit_at_zero() const override { return -kInf; }
    std::optional<double> zero_exponent() const override { return gamma_; }
    std::string kind() const override { return "hyp_log_sinh"; }
    std::map<std::string, double> params() const override {
        return {{"gamma", gamma_}};
    }

  private:
    double gamma_;
};

// phi(u) = inner(scale * u).  Used by the nearest-neighbor particle builder
// where each face carries phi(sqrt(2) u).
class ScaledArgument final : public BarrierPotential {
  public:
    ScaledArgument(PotentialPtr inner, double scale);
    double value(double u) const override;
    double derivative(double u) const override;
    double value_at_zero() const override;
    double derivative_limit_at_zero() const override;
    std::optional<double> zero_exponent() const override;
    double upper_limit() const override;
    bool has_closed_form_prox() const override;
    Prox1dResult closed_form_prox(double z, double tau) const override;
    std::string kind() const override { return "scaled_arg"; }
    std::map<std::string, double> params() const override {
        return {{"scale", scale_}};
    }
    const PotentialPtr& inner() const { return inner_; }

  private:
    PotentialPtr inner_;
    double scale_;
};

// Adapter that withholds the analytic zero-exponent hint, forcing the
// classifier onto its regression estimate.  Mirrors user-hook potentials
// whose asymptotics are unknown; exposed in configs as "hint": false.
class HintWithheld final : public BarrierPotential {
  public:
    explicit HintWithheld(PotentialPtr inner);
    double value(double u) const override { return inner_->value(u); }
    double derivative(double u) const override { return inner_->derivative(u); }
    double value_at_zero() const override { return inner_->value_at_zero(); }
    double derivative_limit_at_zero() const override {
        return inner_->derivative_limit_at_zero();
    }
    std::optional<double> zero_exponent() const override { return std::nullopt; }
    double upper_limit() const override { return inner_->upper_limit(); }
    bool has_closed_form_prox() const override {
        return inner_->has_closed_form_prox();
    }
    Prox1dResult closed_form_prox(double z, double tau) const override {
        return inner_->closed_form_prox(z, tau);
    }
    std::string kind() const override { return inner_->kind(); }
    std::map<std::string, double> params() const override {
        return inner_->params();
    }
    const PotentialPtr& inner() const { return inner_; }

  private:
    PotentialPtr inner_;
};

// Contract operations.  eval handles u = 0 through the declared limit and
// returns +inf beyond the family's upper limit; both reject u < 0.
double eval(const BarrierPotential& p, double u);
double deriv(const BarrierPotential& p, double u);

// argmin_{y >= 0} (y - z)^2 / 2 + tau * phi(y) with its KKT multiplier.
// Dispatches to the family's closed form when available.
Prox1dResult prox1d(const BarrierPotential& p, double z, double tau);

// The generic safeguarded solver (monotone bracketing + secant/bisection on
// y + tau * phi'(y) - z), always taken regardless of closed forms.
Prox1dResult prox1d_generic(const BarrierPotential& p, double z, double tau);

}  // namespace chamber
