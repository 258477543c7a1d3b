#include "anisofermi/background.hpp"

#include <algorithm>
#include <cmath>

#include "anisofermi/error.hpp"

namespace anisofermi {

namespace {

bool strictly_increasing(const std::vector<double>& t) {
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) return false;
    return true;
}

// Three-point finite-difference slopes on a non-uniform grid; one-sided at
// the endpoints. Second-order accurate, which keeps the C1 interpolant good
// enough for the expansion rates feeding the coupling coefficients.
std::vector<double> fd_slopes(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (y[1] - y[0]) / (t[1] - t[0]);
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = t[i] - t[i - 1];
        const double hr = t[i + 1] - t[i];
        d[i] = (hr * hr * (y[i] - y[i - 1]) + hl * hl * (y[i + 1] - y[i])) /
               (hl * hr * (hl + hr));
    }
    {
        const double h0 = t[1] - t[0], h1 = t[2] - t[1];
        d[0] = -(2 * h0 + h1) / (h0 * (h0 + h1)) * y[0] +
               (h0 + h1) / (h0 * h1) * y[1] - h0 / (h1 * (h0 + h1)) * y[2];
    }
    {
        const double h0 = t[n - 2] - t[n - 3], h1 = t[n - 1] - t[n - 2];
        d[n - 1] = h1 / (h0 * (h0 + h1)) * y[n - 3] -
                   (h0 + h1) / (h0 * h1) * y[n - 2] +
                   (2 * h1 + h0) / (h1 * (h0 + h1)) * y[n - 1];
    }
    return d;
}

} // namespace

HermiteSeries::HermiteSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() < 2 || times_.size() != values_.size())
        throw ConfigError("tabulated model needs matching time/value arrays with >= 2 samples");
    if (!strictly_increasing(times_))
        throw ConfigError("tabulated model times not strictly increasing");
    slopes_ = fd_slopes(times_, values_);
}

void HermiteSeries::eval(double t, double& value, double& derivative) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    if (i >= times_.size() - 1) i = times_.size() - 2;
    const double h = times_[i + 1] - times_[i];
    const double s = (t - times_[i]) / h;
    const double y0 = values_[i], y1 = values_[i + 1];
    const double m0 = slopes_[i] * h, m1 = slopes_[i + 1] * h;
    // Hermite basis in the unit variable s.
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    value = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
    const double g00 = 6 * s * (s - 1);
    const double g10 = (1 - s) * (1 - 3 * s);
    const double g01 = -g00;
    const double g11 = s * (3 * s - 2);
    derivative = (g00 * y0 + g10 * m0 + g01 * y1 + g11 * m1) / h;
}

namespace {

TimeInterval natural_validity(const FactorModel& f,
                              const std::array<HermiteSeries, 3>& tables,
                              bool tabulated_ready) {
    TimeInterval iv = TimeInterval::unbounded();
    if (std::holds_alternative<PowerLawFactors>(f)) {
        iv.t_begin = 0;  // open at 0; evaluate() rejects t <= 0 explicitly
    } else if (std::holds_alternative<TabulatedFactors>(f)) {
        if (tabulated_ready) {
            iv.t_begin = tables[0].front_time();
            iv.t_end = tables[0].back_time();
        }
    } else if (auto* iso = std::get_if<IsotropicFactors>(&f)) {
        if (std::holds_alternative<ScalarPowerLawFactor>(iso->axis)) iv.t_begin = 0;
        if (std::holds_alternative<ScalarTableFactor>(iso->axis) && tabulated_ready) {
            iv.t_begin = tables[0].front_time();
            iv.t_end = tables[0].back_time();
        }
    }
    return iv;
}

} // namespace

BackgroundModel::BackgroundModel(FactorModel factors, TimeInterval validity)
    : factors_(std::move(factors)), validity_(validity) {
    try {
        if (auto* tab = std::get_if<TabulatedFactors>(&factors_)) {
            if (tab->times.size() < 4)
                structural_violations_.push_back("tabulated model has fewer than 4 samples");
            for (int axis = 0; axis < 3; ++axis)
                tables_[axis] = HermiteSeries(tab->times, tab->values[axis]);
            tabulated_ready_ = true;
        } else if (auto* iso = std::get_if<IsotropicFactors>(&factors_)) {
            if (auto* st = std::get_if<ScalarTableFactor>(&iso->axis)) {
                if (st->times.size() < 4)
                    structural_violations_.push_back("tabulated model has fewer than 4 samples");
                tables_[0] = HermiteSeries(st->times, st->values);
                tabulated_ready_ = true;
            }
        }
    } catch (const Error& e) {
        structural_violations_.push_back(e.what());
    }
    const TimeInterval nat = natural_validity(factors_, tables_, tabulated_ready_);
    validity_.t_begin = std::max(validity_.t_begin, nat.t_begin);
    validity_.t_end = std::min(validity_.t_end, nat.t_end);
}

BackgroundState BackgroundModel::evaluate(double t) const {
    if (!structural_violations_.empty())
        throw ConfigError("background model is structurally invalid: " +
                          structural_violations_.front());
    if (!validity_.contains(t))
        throw DomainError("time t=" + std::to_string(t) +
                          " outside background validity interval");

    BackgroundState st;
    st.t = t;

    auto power_axis = [t](double a0, double p, double t_ref, double& A, double& Adot) {
        if (t <= 0) throw DomainError("power-law background requires t > 0");
        A = a0 * std::pow(t / t_ref, p);
        Adot = A * p / t;
    };

    if (auto* s = std::get_if<StaticFactors>(&factors_)) {
        st.scale = s->scale;
        st.rate = {0, 0, 0};
    } else if (auto* pl = std::get_if<PowerLawFactors>(&factors_)) {
        for (int i = 0; i < 3; ++i)
            power_axis(pl->amplitude[i], pl->exponent[i], pl->t_ref, st.scale[i], st.rate[i]);
    } else if (auto* iso = std::get_if<IsotropicFactors>(&factors_)) {
        double A = 0, Adot = 0;
        if (auto* ss = std::get_if<ScalarStaticFactor>(&iso->axis)) {
            A = ss->scale;
        } else if (auto* sp = std::get_if<ScalarPowerLawFactor>(&iso->axis)) {
            power_axis(sp->amplitude, sp->exponent, sp->t_ref, A, Adot);
        } else {
            tables_[0].eval(t, A, Adot);
        }
        st.scale = {A, A, A};
        st.rate = {Adot, Adot, Adot};
    } else {
        for (int i = 0; i < 3; ++i) tables_[i].eval(t, st.scale[i], st.rate[i]);
    }

    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(st.scale[i]) || !std::isfinite(st.rate[i]))
            throw NumericError("background evaluation non-finite at t=" + std::to_string(t));
        if (st.scale[i] <= 0)
            throw NumericError("background scale factor non-positive at t=" + std::to_string(t));
        st.hubble[i] = st.rate[i] / st.scale[i];
    }
    st.mean_scale = std::cbrt(st.scale[0] * st.scale[1] * st.scale[2]);
    for (int i = 0; i < 3; ++i) st.alpha[i] = st.scale[i] / st.mean_scale;
    return st;
}

BackgroundState evaluate_background(const BackgroundModel& model, double t) {
    return model.evaluate(t);
}

ModelDiagnostics validate_model(const BackgroundModel& model, TimeInterval interval) {
    ModelDiagnostics diag;
    diag.violations = model.structural_violations();

    const FactorModel& f = model.factors();
    if (auto* s = std::get_if<StaticFactors>(&f)) {
        for (double A : s->scale)
            if (!(A > 0)) diag.violations.push_back("non-positive scale factor");
    } else if (auto* pl = std::get_if<PowerLawFactors>(&f)) {
        for (double a0 : pl->amplitude)
            if (!(a0 > 0)) diag.violations.push_back("non-positive scale factor");
        if (!(pl->t_ref > 0)) diag.violations.push_back("non-positive reference time");
        const double sp = pl->exponent[0] + pl->exponent[1] + pl->exponent[2];
        const double sp2 = pl->exponent[0] * pl->exponent[0] +
                           pl->exponent[1] * pl->exponent[1] +
                           pl->exponent[2] * pl->exponent[2];
        if (std::fabs(sp - 1) <= 1e-12 && std::fabs(sp2 - 1) <= 1e-12)
            diag.flags.push_back("vacuum Kasner");
    } else if (auto* iso = std::get_if<IsotropicFactors>(&f)) {
        if (auto* ss = std::get_if<ScalarStaticFactor>(&iso->axis)) {
            if (!(ss->scale > 0)) diag.violations.push_back("non-positive scale factor");
        } else if (auto* sp = std::get_if<ScalarPowerLawFactor>(&iso->axis)) {
            if (!(sp->amplitude > 0)) diag.violations.push_back("non-positive scale factor");
            if (!(sp->t_ref > 0)) diag.violations.push_back("non-positive reference time");
        } else if (auto* st = std::get_if<ScalarTableFactor>(&iso->axis)) {
            if (!strictly_increasing(st->times))
                diag.violations.push_back("times not strictly increasing");
            for (double v : st->values)
                if (!(v > 0)) {
                    diag.violations.push_back("non-positive scale factor sample");
                    break;
                }
        }
    } else if (auto* tab = std::get_if<TabulatedFactors>(&f)) {
        if (!strictly_increasing(tab->times))
            diag.violations.push_back("times not strictly increasing");
        for (const auto& axis : tab->values) {
            bool bad = false;
            for (double v : axis)
                if (!(v > 0)) bad = true;
            if (bad) {
                diag.violations.push_back("non-positive scale factor sample");
                break;
            }
        }
    }

    if (!model.validity().contains(interval)) {
        diag.violations.push_back("interval outside model validity");
        return diag;
    }
    if (!diag.violations.empty()) return diag;

    // Sampled positivity over the requested interval catches interpolation
    // undershoot between table nodes.
    const int samples = 64;
    for (int i = 0; i <= samples; ++i) {
        const double t = interval.t_begin +
                         (interval.t_end - interval.t_begin) * i / double(samples);
        try {
            (void)model.evaluate(t);
        } catch (const Error& e) {
            diag.violations.push_back(std::string("evaluation fails inside interval: ") +
                                      e.what());
            break;
        }
    }
    return diag;
}

} // namespace anisofermi
