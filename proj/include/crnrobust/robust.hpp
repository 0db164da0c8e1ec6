#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crnrobust/ltl.hpp"
#include "crnrobust/model.hpp"
#include "crnrobust/odesim.hpp"

namespace crnrobust {

/// How far each perturbed trace is simulated before the formula is assessed.
enum class Horizon {
    Fixed,        ///< uniform grid on [0, t_end]
    SteadyState,  ///< until the steady-state criterion fires; non-convergence is a failed sample
};

struct RobustnessQuery {
    ReactionNetwork network;
    IntervalMarking marking;
    Formula formula;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    SimOptions sim;
    Horizon horizon = Horizon::Fixed;
    /// Empty means uniform.
    PerturbationLaw law;

    void validate() const;
};

struct SampleResult {
    std::size_t index = 0;
    std::vector<double> initial;
    double sd = 0.0;
    bool failed = false;
    std::string error;

    friend bool operator==(const SampleResult&, const SampleResult&) = default;
};

struct RobustnessReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples_used = 0;
    std::size_t failures = 0;
    std::vector<SampleResult> per_sample;

    friend bool operator==(const RobustnessReport&, const RobustnessReport&) = default;
};

/// Monte Carlo estimate of the expected satisfaction degree over the interval
/// marking. Samples run in parallel; the aggregate is summed in sample-index
/// order, so the report does not depend on the thread count.
RobustnessReport estimate_robustness(const RobustnessQuery& q);

struct GridStrategy {
    std::size_t points = 20;
};
struct MonteCarloStrategy {
    std::size_t samples = 100;
    std::uint64_t seed = 0;
};
/// Two probes at the ends of the single non-trivial interval. Exact only when
/// the output is certified monotone in the input.
struct EndpointStrategy {};

using AlphaStrategy = std::variant<GridStrategy, MonteCarloStrategy, EndpointStrategy>;

std::string strategy_name(const AlphaStrategy& s);

struct AlphaQuery {
    ReactionNetwork network;
    IntervalMarking marking;
    std::string output;
    double alpha = 0.0;
    AlphaStrategy strategy = GridStrategy{};
    SimOptions sim;

    void validate() const;
};

enum class AlphaStatus { Robust, NotRobust, Undetermined };

std::string_view to_string(AlphaStatus s);

struct Probe {
    std::vector<double> initial;
    double steady_output = 0.0;
    bool reached = false;
    std::optional<double> t_reached;
    std::string error;

    friend bool operator==(const Probe&, const Probe&) = default;
};

struct AlphaReport {
    std::string output;
    double alpha = 0.0;
    bool robust = false;
    AlphaStatus status = AlphaStatus::Undetermined;
    double observed_min = 0.0;
    double observed_max = 0.0;
    double spread = 0.0;
    /// Midpoint witness k of the width-alpha window.
    double center_k = 0.0;
    std::string strategy_used;
    /// False only for endpoints backed by a monotonicity certificate.
    bool approximate = true;
    std::vector<std::vector<double>> failures;
    std::vector<Probe> probes;

    friend bool operator==(const AlphaReport&, const AlphaReport&) = default;
};

/// Initial states probed by a strategy. Grid: a tensor grid of `points`
/// evenly spaced values (endpoints included) over every non-trivial interval.
std::vector<std::vector<double>> probe_points(const IntervalMarking& marking, const AlphaStrategy& strategy);

/// Steady-state output of every probe, then the window verdict.
AlphaReport check_alpha_robustness(const AlphaQuery& q);

/// Verdict from already computed probes.
AlphaReport summarize_probes(std::string output, double alpha, std::string strategy, bool approximate,
                             std::vector<Probe> probes);

/// F(G([output] >= min & [output] <= max)); max - min is the alpha it certifies.
Formula theorem1_formula(const std::string& output, double min, double max);

/// Serial reference drivers, kept for cross-checking the parallel ones and for
/// benchmarking. Results must be bit-identical.
namespace serial {
RobustnessReport estimate_robustness(const RobustnessQuery& q);
AlphaReport check_alpha_robustness(const AlphaQuery& q);
}  // namespace serial

namespace detail {
SampleResult evaluate_sample(const RobustnessQuery& q, const ODESystem& odes, std::size_t index);
Probe evaluate_probe(const ODESystem& odes, std::vector<double> initial, std::size_t output, const SimOptions& sim);
RobustnessReport aggregate(std::vector<SampleResult> samples);
}  // namespace detail

}  // namespace crnrobust
