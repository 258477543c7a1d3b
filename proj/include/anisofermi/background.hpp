#pragma once

#include <array>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace anisofermi {

struct TimeInterval {
    double t_begin = -std::numeric_limits<double>::infinity();
    double t_end = std::numeric_limits<double>::infinity();

    bool contains(double t) const { return t >= t_begin && t <= t_end; }
    bool contains(const TimeInterval& other) const {
        return other.t_begin >= t_begin && other.t_end <= t_end;
    }
    static TimeInterval unbounded() { return {}; }
};

// C1 cubic Hermite interpolant with three-point finite-difference slopes at
// interior nodes and one-sided slopes at the endpoints.
class HermiteSeries {
public:
    HermiteSeries() = default;
    HermiteSeries(std::vector<double> times, std::vector<double> values);

    void eval(double t, double& value, double& derivative) const;
    double front_time() const { return times_.front(); }
    double back_time() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

// Axis-factor models for the anisotropic line element
//   ds^2 = dt^2 - sum_i A_i^2(t) (dx^i)^2.
struct StaticFactors {
    std::array<double, 3> scale{1, 1, 1};
};

// A_i(t) = a0_i * (t / t_ref)^{p_i}, defined for t > 0.
struct PowerLawFactors {
    std::array<double, 3> amplitude{1, 1, 1};
    std::array<double, 3> exponent{0, 0, 0};
    double t_ref = 1;
};

struct ScalarStaticFactor {
    double scale = 1;
};
struct ScalarPowerLawFactor {
    double amplitude = 1;
    double exponent = 0;
    double t_ref = 1;
};
struct ScalarTableFactor {
    std::vector<double> times;
    std::vector<double> values;
};
using ScalarFactorModel =
    std::variant<ScalarStaticFactor, ScalarPowerLawFactor, ScalarTableFactor>;

// One scalar model applied identically to all three axes.
struct IsotropicFactors {
    ScalarFactorModel axis;
};

struct TabulatedFactors {
    std::vector<double> times;
    std::array<std::vector<double>, 3> values;
};

using FactorModel =
    std::variant<StaticFactors, PowerLawFactors, IsotropicFactors, TabulatedFactors>;

// Scale factors, expansion rates, and the derived mean factor at one time.
// a = (A1 A2 A3)^(1/3) and alpha_i = A_i / a, so alpha1*alpha2*alpha3 = 1.
struct BackgroundState {
    double t = 0;
    std::array<double, 3> scale{};   // A_i
    std::array<double, 3> rate{};    // dA_i/dt
    std::array<double, 3> hubble{};  // H_i = rate_i / scale_i
    std::array<double, 3> alpha{};   // A_i / a
    double mean_scale = 0;           // a
};

class BackgroundModel {
public:
    // The effective validity interval is the intersection of `validity` with
    // the model's natural domain (t > 0 for power laws, the sampled range for
    // tables). Evaluation outside it is an error, never extrapolation.
    explicit BackgroundModel(FactorModel factors,
                             TimeInterval validity = TimeInterval::unbounded());

    const FactorModel& factors() const { return factors_; }
    const TimeInterval& validity() const { return validity_; }

    // Structural problems (non-monotone tables, ...) found at construction.
    // Such a model can be inspected and validated but not evaluated.
    const std::vector<std::string>& structural_violations() const {
        return structural_violations_;
    }

    BackgroundState evaluate(double t) const;

private:
    FactorModel factors_;
    TimeInterval validity_;
    std::array<HermiteSeries, 3> tables_;  // prepared interpolants (tabulated models)
    bool tabulated_ready_ = false;
    std::vector<std::string> structural_violations_;
};

BackgroundState evaluate_background(const BackgroundModel& model, double t);

struct ModelDiagnostics {
    std::vector<std::string> violations;
    std::vector<std::string> flags;  // informational, e.g. "vacuum Kasner"
    bool ok() const { return violations.empty(); }
};

ModelDiagnostics validate_model(const BackgroundModel& model, TimeInterval interval);

} // namespace anisofermi
