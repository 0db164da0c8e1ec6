#include "crnrobust/robust.hpp"

namespace crnrobust::serial {

RobustnessReport estimate_robustness(const RobustnessQuery& q) {
    q.validate();
    const auto odes = derive_odes(q.network);
    std::vector<SampleResult> samples;
    samples.reserve(q.samples);
    for (std::size_t i = 0; i < q.samples; ++i) samples.push_back(detail::evaluate_sample(q, odes, i));
    return detail::aggregate(std::move(samples));
}

AlphaReport check_alpha_robustness(const AlphaQuery& q) {
    q.validate();
    const auto odes = derive_odes(q.network);
    const auto out = q.network.species_index(q.output);
    std::vector<Probe> probes;
    for (auto& p : probe_points(q.marking, q.strategy)) probes.push_back(detail::evaluate_probe(odes, std::move(p), out, q.sim));
    return summarize_probes(q.output, q.alpha, strategy_name(q.strategy), true, std::move(probes));
}

}  // namespace crnrobust::serial
