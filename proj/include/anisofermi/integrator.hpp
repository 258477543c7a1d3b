#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "anisofermi/error.hpp"

namespace anisofermi {

struct IntegratorConfig {
    enum class Method { adaptive54, rk4 };
    Method method = Method::adaptive54;
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0;        // 0: automatic ceiling (0.1 / omega(t0) for mode integrations)
    double initial_step = 0;    // 0: automatic
    std::size_t max_steps = 0;  // attempts per advance; 0: 5,000,000
    std::vector<double> output_times;
};

// Explicit Runge-Kutta stepper over a fixed-size real state. Two methods:
// the Dormand-Prince embedded 5(4) pair with PI-free standard step control,
// and classical fixed-step RK4. advance() hits targets exactly, so dense
// output never interpolates.
template <std::size_t N, class Rhs>
class ModeStepper {
public:
    ModeStepper(Rhs rhs, const IntegratorConfig& cfg, double step_ceiling)
        : rhs_(std::move(rhs)), cfg_(cfg),
          ceiling_(step_ceiling > 0 ? step_ceiling
                                    : std::numeric_limits<double>::infinity()) {
        if (cfg_.rel_tol <= 0 || cfg_.abs_tol <= 0)
            throw ConfigError("integrator tolerances must be positive");
    }

    void advance(std::array<double, N>& y, double& t, double t_target) {
        if (t_target < t) throw DomainError("integration target lies in the past");
        if (cfg_.method == IntegratorConfig::Method::rk4)
            advance_rk4(y, t, t_target);
        else
            advance_dp54(y, t, t_target);
    }

private:
    using State = std::array<double, N>;

    void advance_rk4(State& y, double& t, double t_target) {
        double span = t_target - t;
        if (span <= 0) { t = t_target; return; }
        double h = cfg_.initial_step > 0 ? cfg_.initial_step : span / 100.0;
        h = std::min(h, ceiling_);
        auto steps = static_cast<std::size_t>(std::ceil(span / h));
        if (steps == 0) steps = 1;
        h = span / static_cast<double>(steps);
        State k1, k2, k3, k4, tmp;
        for (std::size_t i = 0; i < steps; ++i) {
            rhs_(t, y, k1);
            for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
            rhs_(t + 0.5 * h, tmp, k2);
            for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
            rhs_(t + 0.5 * h, tmp, k3);
            for (std::size_t j = 0; j < N; ++j) tmp[j] = y[j] + h * k3[j];
            rhs_(t + h, tmp, k4);
            for (std::size_t j = 0; j < N; ++j)
                y[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            t += h;
            check_finite(y, t);
        }
        t = t_target;
    }

    void advance_dp54(State& y, double& t, double t_target) {
        if (h_ <= 0) {
            double span = t_target - t;
            h_ = cfg_.initial_step > 0 ? cfg_.initial_step : span / 100.0;
        }
        const std::size_t budget = cfg_.max_steps > 0 ? cfg_.max_steps : 5'000'000;
        std::size_t attempts = 0;
        while (t < t_target) {
            if (++attempts > budget)
                throw NumericError("step budget exhausted (stiffness) at t=" +
                                   std::to_string(t));
            double h = std::min({h_, ceiling_, t_target - t});
            if (h < step_floor(t))
                throw NumericError("step size underflow (stiffness) at t=" +
                                   std::to_string(t));
            double err = try_step(y, t, h);
            if (err <= 1.0) {
                t += h;
                y = y_new_;
                check_finite(y, t);
                h_ = h * grow_factor(err);
            } else {
                h_ = h * shrink_factor(err);
                if (h_ < step_floor(t))
                    throw NumericError("step size underflow (stiffness) at t=" +
                                       std::to_string(t));
            }
        }
        t = t_target;
    }

    // One Dormand-Prince 5(4) attempt; returns the scaled error norm.
    double try_step(const State& y, double t, double h) {
        State k1, k2, k3, k4, k5, k6, k7, tmp;
        rhs_(t, y, k1);
        for (std::size_t j = 0; j < N; ++j)
            tmp[j] = y[j] + h * (a21 * k1[j]);
        rhs_(t + c2 * h, tmp, k2);
        for (std::size_t j = 0; j < N; ++j)
            tmp[j] = y[j] + h * (a31 * k1[j] + a32 * k2[j]);
        rhs_(t + c3 * h, tmp, k3);
        for (std::size_t j = 0; j < N; ++j)
            tmp[j] = y[j] + h * (a41 * k1[j] + a42 * k2[j] + a43 * k3[j]);
        rhs_(t + c4 * h, tmp, k4);
        for (std::size_t j = 0; j < N; ++j)
            tmp[j] = y[j] + h * (a51 * k1[j] + a52 * k2[j] + a53 * k3[j] + a54 * k4[j]);
        rhs_(t + c5 * h, tmp, k5);
        for (std::size_t j = 0; j < N; ++j)
            tmp[j] = y[j] + h * (a61 * k1[j] + a62 * k2[j] + a63 * k3[j] +
                                 a64 * k4[j] + a65 * k5[j]);
        rhs_(t + h, tmp, k6);
        for (std::size_t j = 0; j < N; ++j)
            y_new_[j] = y[j] + h * (a71 * k1[j] + a73 * k3[j] + a74 * k4[j] +
                                    a75 * k5[j] + a76 * k6[j]);
        rhs_(t + h, y_new_, k7);

        double sum = 0;
        for (std::size_t j = 0; j < N; ++j) {
            double e = h * (e1 * k1[j] + e3 * k3[j] + e4 * k4[j] + e5 * k5[j] +
                            e6 * k6[j] + e7 * k7[j]);
            double sc = cfg_.abs_tol +
                        cfg_.rel_tol * std::max(std::fabs(y[j]), std::fabs(y_new_[j]));
            sum += (e / sc) * (e / sc);
        }
        return std::sqrt(sum / static_cast<double>(N));
    }

    // Safety 0.8 keeps the accumulated (global) error close to the local
    // tolerance over runs of a few thousand steps.
    static double grow_factor(double err) {
        if (err <= 0) return 4.0;
        return std::min(4.0, std::max(0.2, 0.8 * std::pow(err, -0.2)));
    }
    static double shrink_factor(double err) {
        return std::max(0.2, 0.8 * std::pow(err, -0.2));
    }
    static double step_floor(double t) {
        return 16.0 * std::numeric_limits<double>::epsilon() *
               std::max(1.0, std::fabs(t));
    }
    void check_finite(const State& y, double t) const {
        for (double v : y)
            if (!std::isfinite(v))
                throw NumericError("state diverged (non-finite) at t=" +
                                   std::to_string(t));
    }

    // Dormand-Prince RK5(4)7M tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                            a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Rhs rhs_;
    IntegratorConfig cfg_;
    double ceiling_;
    double h_ = 0;
    State y_new_{};
};

} // namespace anisofermi
