#include "crnrobust/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crnrobust/qfltl.hpp"

namespace crnrobust {

namespace {

void check_observables(const Formula& f, const ReactionNetwork& net) {
    if (f.kind() == Formula::Kind::Atom) {
        std::string_view name = f.atom().observable;
        if (net.find_species(name)) return;
        if (name.size() > 1 && name[0] == 'd' && net.find_species(name.substr(1))) return;
        throw FormulaError(FormulaError::npos, "unknown observable '" + std::string(name) + "'");
    }
    if (f.kind() == Formula::Kind::True) return;
    check_observables(f.lhs(), net);
    if (f.is_binary()) check_observables(f.rhs(), net);
}

void check_marking(const IntervalMarking& m, const ReactionNetwork& net) {
    if (m.size() != net.num_species())
        throw std::invalid_argument("interval marking has " + std::to_string(m.size()) + " entries, network has " +
                                    std::to_string(net.num_species()) + " species");
    if (!m.bounded()) throw std::invalid_argument("interval marking must be bounded");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void RobustnessQuery::validate() const {
    if (samples == 0) throw std::invalid_argument("samples must be at least 1");
    check_marking(marking, network);
    sim.validate();
    if (!formula.closed()) throw FormulaError(FormulaError::npos, "robustness formula must be closed");
    check_observables(formula, network);
}

void AlphaQuery::validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be a finite value >= 0");
    if (!network.find_species(output)) throw std::invalid_argument("unknown output species '" + output + "'");
    check_marking(marking, network);
    sim.validate();
    if (const auto* g = std::get_if<GridStrategy>(&strategy); g && g->points == 0)
        throw std::invalid_argument("grid needs at least 1 point per axis");
    if (const auto* mc = std::get_if<MonteCarloStrategy>(&strategy); mc && mc->samples == 0)
        throw std::invalid_argument("monte carlo needs at least 1 sample");
    if (std::holds_alternative<EndpointStrategy>(strategy) && marking.nontrivial_indices().size() != 1)
        throw std::invalid_argument("endpoint strategy needs exactly one non-trivial interval");
}

std::string strategy_name(const AlphaStrategy& s) {
    switch (s.index()) {
        case 0: return "grid";
        case 1: return "monte_carlo";
        default: return "monotone_endpoints";
    }
}

std::string_view to_string(AlphaStatus s) {
    switch (s) {
        case AlphaStatus::Robust: return "robust";
        case AlphaStatus::NotRobust: return "not_robust";
        case AlphaStatus::Undetermined: return "undetermined";
    }
    return "?";
}

std::vector<std::vector<double>> probe_points(const IntervalMarking& marking, const AlphaStrategy& strategy) {
    std::vector<std::vector<double>> pts;
    const auto base = marking.lower_corner();
    const auto free = marking.nontrivial_indices();
    if (const auto* g = std::get_if<GridStrategy>(&strategy)) {
        if (g->points == 0) throw std::invalid_argument("grid needs at least 1 point per axis");
        double total = 1.0;
        for (std::size_t k = 0; k < free.size(); ++k) total *= static_cast<double>(g->points);
        if (total > 1e7) throw std::invalid_argument("grid has too many points");
        auto axis = [&](std::size_t i, std::size_t k) {
            const auto& iv = marking[i];
            if (g->points == 1) return iv.lo();
            if (k + 1 == g->points) return iv.hi();
            return iv.lo() + iv.width() * static_cast<double>(k) / static_cast<double>(g->points - 1);
        };
        std::vector<std::size_t> idx(free.size(), 0);
        for (;;) {
            auto p = base;
            for (std::size_t a = 0; a < free.size(); ++a) p[free[a]] = axis(free[a], idx[a]);
            pts.push_back(std::move(p));
            // Last axis varies fastest.
            std::size_t a = free.size();
            while (a > 0 && ++idx[a - 1] == g->points) idx[--a] = 0;
            if (a == 0) break;
        }
    } else if (const auto* mc = std::get_if<MonteCarloStrategy>(&strategy)) {
        for (std::size_t i = 0; i < mc->samples; ++i) pts.push_back(sample_marking(marking, derive_seed(mc->seed, i)));
    } else {
        if (free.size() != 1) throw std::invalid_argument("endpoint strategy needs exactly one non-trivial interval");
        auto lo = base;
        auto hi = base;
        hi[free[0]] = marking[free[0]].hi();
        pts.push_back(std::move(lo));
        pts.push_back(std::move(hi));
    }
    return pts;
}

AlphaReport summarize_probes(std::string output, double alpha, std::string strategy, bool approximate,
                             std::vector<Probe> probes) {
    AlphaReport r;
    r.output = std::move(output);
    r.alpha = alpha;
    r.strategy_used = std::move(strategy);
    r.approximate = approximate;
    bool any = false;
    double lo = kNaN, hi = kNaN;
    for (const auto& p : probes) {
        if (!p.reached || !p.error.empty()) {
            r.failures.push_back(p.initial);
            continue;
        }
        if (!any) {
            lo = hi = p.steady_output;
            any = true;
        } else {
            lo = std::min(lo, p.steady_output);
            hi = std::max(hi, p.steady_output);
        }
    }
    r.probes = std::move(probes);
    r.observed_min = lo;
    r.observed_max = hi;
    r.spread = any ? hi - lo : kNaN;
    r.center_k = any ? lo + (hi - lo) / 2.0 : kNaN;
    if (any && r.spread > alpha)
        r.status = AlphaStatus::NotRobust;
    else if (!any || !r.failures.empty())
        r.status = AlphaStatus::Undetermined;
    else
        r.status = AlphaStatus::Robust;
    r.robust = r.status == AlphaStatus::Robust;
    return r;
}

Formula theorem1_formula(const std::string& output, double min, double max) {
    if (!(min <= max)) throw std::invalid_argument("theorem1_formula: min must not exceed max");
    return Formula::finally(Formula::globally(Formula::conjunction(Formula::atom(output, Cmp::GreaterEq, min),
                                                                   Formula::atom(output, Cmp::LessEq, max))));
}

namespace detail {

SampleResult evaluate_sample(const RobustnessQuery& q, const ODESystem& odes, std::size_t index) {
    SampleResult s;
    s.index = index;
    try {
        const auto seed = derive_seed(q.seed, index);
        s.initial = q.law ? sample_marking(q.marking, seed, q.law) : sample_marking(q.marking, seed);
        if (q.horizon == Horizon::Fixed) {
            s.sd = satisfaction_degree(simulate(odes, s.initial, q.sim), q.formula);
        } else {
            auto [trace, ss] = find_steady_state(odes, s.initial, q.sim);
            if (!ss.reached) {
                s.failed = true;
                s.error = "steady state not reached by t = " + format_number(q.sim.t_max_extend);
                return s;
            }
            s.sd = satisfaction_degree(trace, q.formula);
        }
    } catch (const std::exception& e) {
        s.failed = true;
        s.sd = 0.0;
        s.error = e.what();
    }
    return s;
}

Probe evaluate_probe(const ODESystem& odes, std::vector<double> initial, std::size_t output, const SimOptions& sim) {
    Probe p;
    p.initial = std::move(initial);
    try {
        auto [trace, ss] = find_steady_state(odes, p.initial, sim);
        p.reached = ss.reached;
        p.t_reached = ss.t_reached;
        p.steady_output = ss.marking[output];
        if (!ss.reached) p.error = "steady state not reached by t = " + format_number(sim.t_max_extend);
    } catch (const std::exception& e) {
        p.reached = false;
        p.steady_output = kNaN;
        p.error = e.what();
    }
    return p;
}

RobustnessReport aggregate(std::vector<SampleResult> samples) {
    RobustnessReport r;
    double sum = 0.0, comp = 0.0;
    std::size_t n = 0;
    bool identical = true;
    double first = 0.0;
    for (const auto& s : samples) {
        if (s.failed) {
            ++r.failures;
            continue;
        }
        if (n == 0)
            first = s.sd;
        else if (s.sd != first)
            identical = false;
        ++n;
        // Neumaier
        const double t = sum + s.sd;
        if (std::abs(sum) >= std::abs(s.sd))
            comp += (sum - t) + s.sd;
        else
            comp += (s.sd - t) + sum;
        sum = t;
    }
    r.samples_used = n;
    if (n == 0) {
        r.estimate = kNaN;
        r.std_error = kNaN;
    } else if (identical) {
        r.estimate = first;
        r.std_error = 0.0;
    } else {
        const double mean = (sum + comp) / static_cast<double>(n);
        double ss = 0.0, c2 = 0.0;
        for (const auto& s : samples) {
            if (s.failed) continue;
            const double d = (s.sd - mean) * (s.sd - mean);
            const double t = ss + d;
            c2 += std::abs(ss) >= d ? (ss - t) + d : (d - t) + ss;
            ss = t;
        }
        r.estimate = mean;
        r.std_error = n > 1 ? std::sqrt((ss + c2) / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    }
    r.per_sample = std::move(samples);
    return r;
}

}  // namespace detail

RobustnessReport estimate_robustness(const RobustnessQuery& q) {
    q.validate();
    const auto odes = derive_odes(q.network);
    const auto n = static_cast<std::ptrdiff_t>(q.samples);
    std::vector<SampleResult> samples(q.samples);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        samples[static_cast<std::size_t>(i)] = detail::evaluate_sample(q, odes, static_cast<std::size_t>(i));
    return detail::aggregate(std::move(samples));
}

AlphaReport check_alpha_robustness(const AlphaQuery& q) {
    q.validate();
    const auto odes = derive_odes(q.network);
    const auto out = q.network.species_index(q.output);
    auto pts = probe_points(q.marking, q.strategy);
    const auto n = static_cast<std::ptrdiff_t>(pts.size());
    std::vector<Probe> probes(pts.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        probes[k] = detail::evaluate_probe(odes, std::move(pts[k]), out, q.sim);
    }
    // Endpoints are exact only under a monotonicity certificate, which this
    // driver does not check; see endpoint_verification.
    return summarize_probes(q.output, q.alpha, strategy_name(q.strategy), true, std::move(probes));
}

}  // namespace crnrobust
