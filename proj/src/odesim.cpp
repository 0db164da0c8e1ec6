#include "crnrobust/odesim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace crnrobust {

std::optional<std::size_t> Trace::observable(std::string_view name) const {
    for (std::size_t j = 0; j < species.size(); ++j)
        if (species[j] == name) return j;
    if (name.size() > 1 && name.front() == 'd') {
        const auto base = name.substr(1);
        for (std::size_t j = 0; j < species.size(); ++j)
            if (species[j] == base) return species.size() + j;
    }
    return std::nullopt;
}

SimOptions SimOptions::for_horizon(double t_end, std::size_t output_points) {
    SimOptions o;
    o.t_end = t_end;
    if (output_points != 0) o.output_points = output_points;
    o.ss_window = 0.05 * t_end;
    o.t_max_extend = 10.0 * t_end;
    return o;
}

void SimOptions::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(t_end)) throw std::invalid_argument("t_end must be a positive finite number");
    if (output_points < 2) throw std::invalid_argument("output_points must be at least 2");
    if (!positive(rel_tol)) throw std::invalid_argument("rel_tol must be positive");
    if (!positive(abs_tol)) throw std::invalid_argument("abs_tol must be positive");
    if (!positive(ss_tol)) throw std::invalid_argument("ss_tol must be positive");
    if (!positive(ss_window)) throw std::invalid_argument("ss_window must be positive");
    if (!(t_max_extend >= t_end) || !std::isfinite(t_max_extend))
        throw std::invalid_argument("t_max_extend must be finite and >= t_end");
    if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
}

namespace {

// Dormand-Prince 5(4) coefficients with Shampine's dense output. The mass-action
// right-hand side is autonomous, so the node coefficients c_i are not needed.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

class DormandPrince {
public:
    DormandPrince(const ODESystem& f, std::span<const double> y0, const SimOptions& opts)
        : f_(f), opts_(opts), n_(y0.size()), y_(y0.begin(), y0.end()), k1_(n_), k2_(n_), k3_(n_), k4_(n_),
          k5_(n_), k6_(n_), k7_(n_), ynew_(n_), ytmp_(n_), r1_(n_), r2_(n_), r3_(n_), r4_(n_), r5_(n_) {
        f_.evaluate(y_, k1_);
        h_ = initial_step();
    }

    double t() const noexcept { return t_; }

    /// Advances one accepted step. Afterwards the dense interpolant covers
    /// [t_prev, t]. Throws SimulationError.
    void step(double t_limit) {
        const double eps = std::numeric_limits<double>::epsilon();
        double facmax = 5.0;
        for (;;) {
            if (++steps_ > opts_.max_steps) throw SimulationError(t_, "step budget exhausted");
            double h = std::min(h_, t_limit - t_);
            if (h <= 16.0 * eps * std::max(1.0, std::abs(t_)))
                throw SimulationError(t_, "step size underflow");
            const double err = attempt(h);
            if (std::isfinite(err) && err <= 1.0) {
                accept(h);
                const double fac = err == 0.0 ? facmax : std::clamp(0.9 * std::pow(err, -0.2), 0.2, facmax);
                h_ = h * fac;
                return;
            }
            // Rejected: shrink and forbid growth on the retry.
            const double fac = std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0) : 0.1;
            h_ = h * fac;
            facmax = 1.0;
        }
    }

    /// Dense output at t_prev <= s <= t, clamped to nonnegative values.
    void interpolate(double s, std::span<double> out) const {
        const double theta = h_last_ == 0.0 ? 1.0 : (s - t_prev_) / h_last_;
        const double theta1 = 1.0 - theta;
        for (std::size_t i = 0; i < n_; ++i) {
            const double v = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
            out[i] = v < 0.0 ? 0.0 : v;
        }
    }

    const std::vector<double>& state() const noexcept { return y_; }

private:
    double norm_scaled(std::span<const double> v) const {
        if (n_ == 0) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double sc = opts_.abs_tol + opts_.rel_tol * std::abs(y_[i]);
            s += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(s / static_cast<double>(n_));
    }

    double initial_step() {
        const double d0 = norm_scaled(y_);
        const double d1n = norm_scaled(k1_);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, opts_.t_end);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h0 * k1_[i];
        f_.evaluate(ytmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = k2_[i] - k1_[i];
        const double d2 = norm_scaled(ytmp_) / h0;
        const double h1 = std::max(d1n, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                                      : std::pow(0.01 / std::max(d1n, d2), 0.2);
        return std::min({100.0 * h0, h1, opts_.t_end});
    }

    double attempt(double h) {
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h * a21 * k1_[i];
        f_.evaluate(ytmp_, k2_);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
        f_.evaluate(ytmp_, k3_);
        for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
        f_.evaluate(ytmp_, k4_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
        f_.evaluate(ytmp_, k5_);
        for (std::size_t i = 0; i < n_; ++i)
            ytmp_[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
        f_.evaluate(ytmp_, k6_);
        for (std::size_t i = 0; i < n_; ++i)
            ynew_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
        f_.evaluate(ynew_, k7_);
        if (n_ == 0) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double e =
                h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
            const double sc = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew_[i]));
            s += (e / sc) * (e / sc);
        }
        return std::sqrt(s / static_cast<double>(n_));
    }

    void accept(double h) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double dy = ynew_[i] - y_[i];
            const double bspl = h * k1_[i] - dy;
            r1_[i] = y_[i];
            r2_[i] = dy;
            r3_[i] = bspl;
            r4_[i] = dy - h * k7_[i] - bspl;
            r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
        }
        t_prev_ = t_;
        h_last_ = h;
        t_ += h;
        bool clamped = false;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!std::isfinite(ynew_[i])) throw SimulationError(t_, "non-finite state");
            if (ynew_[i] < 0.0) {
                ynew_[i] = 0.0;
                clamped = true;
            }
        }
        y_.swap(ynew_);
        if (clamped)
            f_.evaluate(y_, k1_);
        else
            k1_.swap(k7_);
    }

    const ODESystem& f_;
    const SimOptions& opts_;
    std::size_t n_;
    std::vector<double> y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, ynew_, ytmp_;
    std::vector<double> r1_, r2_, r3_, r4_, r5_;
    double t_ = 0.0;
    double t_prev_ = 0.0;
    double h_ = 0.0;
    double h_last_ = 0.0;
    std::size_t steps_ = 0;
};

double grid_time(const SimOptions& opts, std::size_t k) {
    return opts.t_end * static_cast<double>(k) / static_cast<double>(opts.output_points - 1);
}

void check_init(const ODESystem& odes, std::span<const double> init) {
    if (init.size() != odes.dimension()) throw std::invalid_argument("initial state has wrong dimension");
    for (double v : init)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("initial concentrations must be finite and nonnegative");
}

/// Emits grid points k = 0, 1, ... while `on_point` returns true and the grid
/// time does not exceed t_stop.
void integrate_on_grid(const ODESystem& odes, std::span<const double> init, const SimOptions& opts, double t_stop,
                       const std::function<bool(TimedState&&)>& on_point) {
    TimedState s0{0.0, std::vector<double>(init.begin(), init.end()), odes.evaluate(init)};
    if (!on_point(std::move(s0))) return;
    DormandPrince rk(odes, init, opts);
    std::size_t k = 1;
    double tk = grid_time(opts, k);
    // Sub-ulp overshoot of the last grid point is tolerated.
    const double t_last = t_stop * (1.0 + 4 * std::numeric_limits<double>::epsilon());
    while (tk <= t_last) {
        rk.step(t_last);
        while (tk <= rk.t() && tk <= t_last) {
            TimedState s;
            s.t = tk;
            s.x.resize(odes.dimension());
            rk.interpolate(tk, s.x);
            s.xdot = odes.evaluate(s.x);
            for (double v : s.xdot)
                if (!std::isfinite(v)) throw SimulationError(tk, "non-finite derivative");
            if (!on_point(std::move(s))) return;
            tk = grid_time(opts, ++k);
        }
    }
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

Trace simulate(const ODESystem& odes, std::span<const double> init, const SimOptions& opts) {
    opts.validate();
    check_init(odes, init);
    Trace trace;
    trace.species = odes.species();
    trace.states.reserve(opts.output_points);
    integrate_on_grid(odes, init, opts, opts.t_end, [&](TimedState&& s) {
        trace.states.push_back(std::move(s));
        return trace.states.size() < opts.output_points;
    });
    return trace;
}

std::pair<Trace, SteadyStateReport> find_steady_state(const ODESystem& odes, std::span<const double> init,
                                                      const SimOptions& opts) {
    opts.validate();
    check_init(odes, init);
    Trace trace;
    trace.species = odes.species();
    SteadyStateReport report;
    std::optional<double> below_since;
    const double slack = 1e-9 * opts.grid_spacing();
    integrate_on_grid(odes, init, opts, opts.t_max_extend, [&](TimedState&& s) {
        const bool small = max_abs(s.xdot) < opts.ss_tol;
        if (!small)
            below_since.reset();
        else if (!below_since)
            below_since = s.t;
        const double t = s.t;
        trace.states.push_back(std::move(s));
        if (below_since && t - *below_since + slack >= opts.ss_window) {
            report.reached = true;
            report.t_reached = t;
            return false;
        }
        return true;
    });
    report.marking = trace.back().x;
    return {std::move(trace), std::move(report)};
}

std::vector<std::optional<double>> settling_times(const Trace& trace, double ss_tol, double ss_window) {
    const auto n = trace.species.size();
    std::vector<std::optional<double>> out(n);
    if (trace.empty()) return out;
    const double t_last = trace.back().t;
    for (std::size_t j = 0; j < n; ++j) {
        std::optional<std::size_t> first;
        for (std::size_t i = trace.size(); i-- > 0;) {
            if (std::abs(trace.states[i].xdot[j]) < ss_tol)
                first = i;
            else
                break;
        }
        if (first && t_last - trace.states[*first].t >= ss_window) out[j] = trace.states[*first].t;
    }
    return out;
}

}  // namespace crnrobust
