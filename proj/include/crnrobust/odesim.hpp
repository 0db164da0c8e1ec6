#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnrobust/model.hpp"

namespace crnrobust {

struct TimedState {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> xdot;

    friend bool operator==(const TimedState&, const TimedState&) = default;
};

/// Finite numerical timed trace; `t` strictly increasing.
struct Trace {
    std::vector<std::string> species;
    std::vector<TimedState> states;

    std::size_t size() const noexcept { return states.size(); }
    bool empty() const noexcept { return states.empty(); }
    const TimedState& back() const { return states.back(); }

    /// Column index of an observable: species name -> [0, n), `d<name>` -> [n, 2n).
    std::optional<std::size_t> observable(std::string_view name) const;
    /// Value of an observable column at a state index.
    double value(std::size_t state, std::size_t column) const {
        const auto n = species.size();
        return column < n ? states[state].x[column] : states[state].xdot[column - n];
    }

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct SimOptions {
    double t_end = 100.0;
    std::size_t output_points = 101;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double ss_tol = 1e-6;
    double ss_window = 5.0;
    double t_max_extend = 1000.0;
    std::size_t max_steps = 50'000'000;

    /// Defaults tied to a horizon: window 5% of t_end, search cap 10 * t_end.
    static SimOptions for_horizon(double t_end, std::size_t output_points = 0);

    /// Throws std::invalid_argument naming the bad field.
    void validate() const;
    double grid_spacing() const { return t_end / static_cast<double>(output_points - 1); }
};

/// Integration failure: step-size underflow, step budget exhausted, or a
/// non-finite state. `time()` is where the integrator stopped.
class SimulationError : public std::runtime_error {
public:
    SimulationError(double t, const std::string& what)
        : std::runtime_error(what + " at t = " + std::to_string(t)), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

struct SteadyStateReport {
    bool reached = false;
    std::optional<double> t_reached;
    std::vector<double> marking;
};

/// Adaptive Dormand-Prince 5(4) integration sampled on the uniform grid
/// t_k = k * t_end / (output_points - 1). Negative round-off is clamped to 0.
Trace simulate(const ODESystem& odes, std::span<const double> init, const SimOptions& opts);

/// Integrates on the same grid spacing until ||xdot||_inf < ss_tol holds at
/// every grid point of a trailing window of length ss_window, or until
/// t_max_extend. The trace ends at detection (or at the cap).
std::pair<Trace, SteadyStateReport> find_steady_state(const ODESystem& odes, std::span<const double> init,
                                                      const SimOptions& opts);

/// Per-species settling time on a trace: earliest grid time after which
/// |xdot_j| < ss_tol holds up to the end of the trace, provided that tail
/// spans at least ss_window. Absent when the species never settles.
std::vector<std::optional<double>> settling_times(const Trace& trace, double ss_tol, double ss_window);

void write_trace_csv(std::ostream& os, const Trace& trace);
void write_trace_csv(const std::string& path, const Trace& trace);
/// Reads the `t,<species...>,d<species...>` format. Throws std::runtime_error
/// with the offending line number.
Trace read_trace_csv(std::istream& is);
Trace read_trace_csv(const std::string& path);

}  // namespace crnrobust
