#include "crnrobust/mono.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace crnrobust {

RGraph build_r_graph(const ReactionNetwork& net) {
    RGraph g;
    g.nodes = net.num_reactions();
    const auto& rs = net.reactions();
    auto has = [](const std::vector<StoichTerm>& terms, std::size_t s) {
        for (const auto& t : terms)
            if (t.species == s) return true;
        return false;
    };
    auto shares = [&](const std::vector<StoichTerm>& a, const std::vector<StoichTerm>& b) {
        for (const auto& t : a)
            if (has(b, t.species)) return true;
        return false;
    };
    for (std::size_t i = 0; i < rs.size(); ++i) {
        for (std::size_t j = i + 1; j < rs.size(); ++j) {
            if (shares(rs[i].products, rs[j].reactants) || shares(rs[j].products, rs[i].reactants))
                g.e_plus.emplace(i, j);
            if (shares(rs[i].reactants, rs[j].reactants) || shares(rs[i].products, rs[j].products))
                g.e_minus.emplace(i, j);
        }
    }
    return g;
}

namespace {

class ParityUnionFind {
public:
    explicit ParityUnionFind(std::size_t n) : parent_(n), rank_(n, 0), parity_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    /// Root of x and the parity of x relative to it.
    std::pair<std::size_t, int> find(std::size_t x) {
        int p = 0;
        std::size_t r = x;
        while (parent_[r] != r) {
            p ^= parity_[r];
            r = parent_[r];
        }
        // Path compression, rewriting parities along the way.
        int acc = p;
        while (parent_[x] != r) {
            const auto next = parent_[x];
            const int old = parity_[x];
            parent_[x] = r;
            parity_[x] = acc;
            acc ^= old;
            x = next;
        }
        return {r, p};
    }

    /// Requires parity(a) ^ parity(b) == rel. False on contradiction.
    bool unite(std::size_t a, std::size_t b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
        parent_[rb] = ra;
        parity_[rb] = pa ^ pb ^ rel;
        if (rank_[ra] == rank_[rb]) ++rank_[ra];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> rank_;
    std::vector<int> parity_;
};

}  // namespace

std::optional<Labeling> consistent_labeling(const RGraph& g) {
    ParityUnionFind uf(g.nodes);
    for (const auto& [i, j] : g.e_plus)
        if (!uf.unite(i, j, 0)) return std::nullopt;
    for (const auto& [i, j] : g.e_minus)
        if (!uf.unite(i, j, 1)) return std::nullopt;
    // Normalize so that the smallest node of each component is +.
    std::vector<int> root_flip(g.nodes, -1);
    Labeling sigma(g.nodes, 1);
    for (std::size_t v = 0; v < g.nodes; ++v) {
        const auto [r, p] = uf.find(v);
        if (root_flip[r] < 0) root_flip[r] = p;
        sigma[v] = (p ^ root_flip[r]) ? -1 : 1;
    }
    return sigma;
}

bool is_consistent(const RGraph& g, const Labeling& sigma) {
    if (sigma.size() != g.nodes) return false;
    for (const auto& [i, j] : g.e_plus)
        if (sigma[i] != sigma[j]) return false;
    for (const auto& [i, j] : g.e_minus)
        if (sigma[i] == sigma[j]) return false;
    return true;
}

std::string_view to_string(MonotonicityKind k) {
    switch (k) {
        case MonotonicityKind::PositivelyMonotonic: return "PositivelyMonotonic";
        case MonotonicityKind::NegativelyMonotonic: return "NegativelyMonotonic";
        case MonotonicityKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string_view to_string(FailedCondition c) {
    switch (c) {
        case FailedCondition::None: return "none";
        case FailedCondition::NoConsistentLabeling: return "no_consistent_labeling";
        case FailedCondition::InputInvolvement: return "input_involvement";
        case FailedCondition::OutputInvolvement: return "output_involvement";
        case FailedCondition::ZeroProduct: return "zero_product";
        case FailedCondition::Disconnected: return "disconnected";
        case FailedCondition::ChainLink: return "chain_link";
    }
    return "?";
}

namespace {

std::vector<std::size_t> involving(const ReactionNetwork& net, std::size_t s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < net.num_reactions(); ++i) {
        const auto& r = net.reactions()[i];
        if (r.reactant_coeff(s) != 0 || r.product_coeff(s) != 0) out.push_back(i);
    }
    return out;
}

std::string involvement_reason(const std::string& role, const std::string& name, std::size_t count) {
    return role + " species " + name + " is involved in " + std::to_string(count) +
           " reactions as reactant or product, expected exactly 1";
}

bool connected(const RGraph& g, std::size_t a, std::size_t b) {
    std::vector<std::vector<std::size_t>> adj(g.nodes);
    for (const auto* edges : {&g.e_plus, &g.e_minus})
        for (const auto& [i, j] : *edges) {
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    std::vector<bool> seen(g.nodes, false);
    std::vector<std::size_t> stack{a};
    seen[a] = true;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (v == b) return true;
        for (auto w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return false;
}

MonotonicityVerdict classify(const ReactionNetwork& net, const RGraph& g, const std::string& input,
                             const std::string& output, const std::optional<Labeling>& sigma) {
    const auto in = net.find_species(input);
    const auto out = net.find_species(output);
    if (!in) throw std::invalid_argument("unknown input species '" + input + "'");
    if (!out) throw std::invalid_argument("unknown output species '" + output + "'");
    if (*in == *out) throw std::invalid_argument("input and output must be different species");

    MonotonicityVerdict v;
    v.input = input;
    v.output = output;
    v.witness = sigma;
    if (!sigma) {
        v.failed = FailedCondition::NoConsistentLabeling;
        v.reason = "the R-graph admits no consistent labeling";
        return v;
    }
    const auto ri = involving(net, *in);
    if (ri.size() != 1) {
        v.failed = FailedCondition::InputInvolvement;
        v.reason = involvement_reason("input", input, ri.size());
        return v;
    }
    v.input_reaction = ri[0];
    const auto ro = involving(net, *out);
    if (ro.size() != 1) {
        v.failed = FailedCondition::OutputInvolvement;
        v.reason = involvement_reason("output", output, ro.size());
        return v;
    }
    v.output_reaction = ro[0];
    const auto gamma = stoichiometric_matrix(net);
    const int gi = gamma(*in, ri[0]);
    const int go = gamma(*out, ro[0]);
    if (gi == 0 || go == 0) {
        v.failed = FailedCondition::ZeroProduct;
        v.reason = "net stoichiometry of the " + std::string(gi == 0 ? "input" : "output") +
                   " in its reaction is zero";
        return v;
    }
    if (!connected(g, ri[0], ro[0])) {
        v.failed = FailedCondition::Disconnected;
        v.reason = "reactions " + net.reactions()[ri[0]].name + " and " + net.reactions()[ro[0]].name +
                   " lie in different components of the R-graph";
        return v;
    }
    v.p_in = gi * (*sigma)[ri[0]];
    v.p_out = go * (*sigma)[ro[0]];
    v.kind = (v.p_in > 0) != (v.p_out > 0) ? MonotonicityKind::PositivelyMonotonic : MonotonicityKind::NegativelyMonotonic;
    return v;
}

int sign_of(MonotonicityKind k) { return k == MonotonicityKind::PositivelyMonotonic ? 1 : -1; }

}  // namespace

MonotonicityVerdict classify_monotonicity(const ReactionNetwork& net, const std::string& input,
                                          const std::string& output) {
    const auto g = build_r_graph(net);
    return classify(net, g, input, output, consistent_labeling(g));
}

MonotonicityVerdict classify_with_labeling(const ReactionNetwork& net, const std::string& input,
                                           const std::string& output, const Labeling& sigma) {
    const auto g = build_r_graph(net);
    if (!is_consistent(g, sigma)) throw std::invalid_argument("labeling is not consistent");
    return classify(net, g, input, output, sigma);
}

ChainVerdict classify_chain(const ReactionNetwork& net, const std::vector<ChainStep>& steps) {
    if (steps.empty()) throw std::invalid_argument("chain has no steps");
    ChainVerdict cv;
    int sign = 1;
    std::vector<ReactionNetwork> subs;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& st = steps[k];
        subs.push_back(st.reactions.empty() ? net : net.subnetwork(st.reactions));
        auto v = classify_monotonicity(subs.back(), st.input, st.output);
        const bool ok = v.monotone();
        if (ok) sign *= sign_of(v.kind);
        cv.steps.push_back(std::move(v));
        if (!ok) {
            cv.failed = cv.steps.back().failed;
            cv.reason = "step " + std::to_string(k + 1) + ": " + cv.steps.back().reason;
            return cv;
        }
    }
    for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
        const auto& next = cv.steps[k + 1];
        if (steps[k].output == steps[k + 1].input) continue;
        const auto& r = subs[k + 1].reactions()[*next.input_reaction];
        const auto link = subs[k + 1].find_species(steps[k].output);
        if (link && r.has_modifier(*link)) continue;
        cv.failed = FailedCondition::ChainLink;
        cv.reason = "step " + std::to_string(k + 1) + " output " + steps[k].output + " does not feed step " +
                    std::to_string(k + 2) + " input " + steps[k + 1].input;
        return cv;
    }
    cv.kind = sign > 0 ? MonotonicityKind::PositivelyMonotonic : MonotonicityKind::NegativelyMonotonic;
    return cv;
}

std::vector<ChainStep> parse_chain(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("chain: ") + e.what());
    }
    if (!doc.is_array()) throw std::invalid_argument("chain: expected an array of steps");
    std::vector<ChainStep> steps;
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const auto& s = doc[k];
        const auto at = "chain/" + std::to_string(k);
        if (!s.is_object() || !s.contains("input") || !s.contains("output") || !s["input"].is_string() ||
            !s["output"].is_string())
            throw std::invalid_argument(at + ": step needs string fields input and output");
        ChainStep st;
        st.input = s["input"].get<std::string>();
        st.output = s["output"].get<std::string>();
        if (s.contains("reactions")) {
            if (!s["reactions"].is_array()) throw std::invalid_argument(at + "/reactions: expected an array");
            for (const auto& r : s["reactions"]) {
                if (!r.is_string()) throw std::invalid_argument(at + "/reactions: expected reaction names");
                st.reactions.push_back(r.get<std::string>());
            }
        }
        steps.push_back(std::move(st));
    }
    return steps;
}

std::vector<ChainStep> load_chain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_chain(ss.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

namespace {

std::vector<std::vector<double>> endpoints(const ReactionNetwork& net, std::size_t in, const Interval& iv) {
    auto lo = net.initial_state();
    auto hi = lo;
    lo[in] = iv.lo();
    hi[in] = iv.hi();
    return {lo, hi};
}

void check_endpoint_args(const ReactionNetwork& net, const std::string& input, const Interval& iv,
                         const std::string& output, double alpha, const SimOptions& sim, MonotonicityKind kind) {
    if (kind == MonotonicityKind::Inconclusive)
        throw std::invalid_argument("endpoint verification needs a monotone verdict");
    if (!net.find_species(input)) throw std::invalid_argument("unknown input species '" + input + "'");
    if (!net.find_species(output)) throw std::invalid_argument("unknown output species '" + output + "'");
    if (!iv.bounded()) throw std::invalid_argument("input interval must be bounded");
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("alpha must be a finite value >= 0");
    sim.validate();
}

AlphaReport finish(const std::string& output, double alpha, MonotonicityKind kind, std::vector<Probe> probes) {
    auto r = summarize_probes(output, alpha, "monotone_endpoints", false, std::move(probes));
    if (r.failures.empty()) {
        const double at_lo = r.probes[0].steady_output;
        const double at_hi = r.probes[1].steady_output;
        r.observed_min = kind == MonotonicityKind::PositivelyMonotonic ? at_lo : at_hi;
        r.observed_max = kind == MonotonicityKind::PositivelyMonotonic ? at_hi : at_lo;
        r.spread = std::abs(at_hi - at_lo);
        r.center_k = at_lo + (at_hi - at_lo) / 2.0;
        r.status = r.spread <= alpha ? AlphaStatus::Robust : AlphaStatus::NotRobust;
        r.robust = r.status == AlphaStatus::Robust;
    }
    return r;
}

}  // namespace

AlphaReport endpoint_verification(const ReactionNetwork& net, const std::string& input, const Interval& input_interval,
                                  const std::string& output, double alpha, const SimOptions& sim,
                                  MonotonicityKind kind) {
    check_endpoint_args(net, input, input_interval, output, alpha, sim, kind);
    const auto odes = derive_odes(net);
    const auto out = net.species_index(output);
    auto pts = endpoints(net, net.species_index(input), input_interval);
    std::vector<Probe> probes(2);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < 2; ++k) probes[k] = detail::evaluate_probe(odes, std::move(pts[k]), out, sim);
    return finish(output, alpha, kind, std::move(probes));
}

AlphaReport serial::endpoint_verification(const ReactionNetwork& net, const std::string& input,
                                          const Interval& input_interval, const std::string& output, double alpha,
                                          const SimOptions& sim, MonotonicityKind kind) {
    check_endpoint_args(net, input, input_interval, output, alpha, sim, kind);
    const auto odes = derive_odes(net);
    const auto out = net.species_index(output);
    std::vector<Probe> probes;
    for (auto& p : endpoints(net, net.species_index(input), input_interval))
        probes.push_back(detail::evaluate_probe(odes, std::move(p), out, sim));
    return finish(output, alpha, kind, std::move(probes));
}

std::string to_dot(const ReactionNetwork& net, const RGraph& g, const std::optional<Labeling>& sigma) {
    std::ostringstream os;
    os << "graph rgraph {\n";
    for (std::size_t i = 0; i < g.nodes; ++i) {
        os << "  r" << i << " [label=\"" << net.reactions()[i].name;
        if (sigma) os << " (" << ((*sigma)[i] > 0 ? '+' : '-') << ')';
        os << "\"];\n";
    }
    for (const auto& [i, j] : g.e_plus) os << "  r" << i << " -- r" << j << " [style=solid];\n";
    for (const auto& [i, j] : g.e_minus) os << "  r" << i << " -- r" << j << " [style=dashed];\n";
    os << "}\n";
    return os.str();
}

}  // namespace crnrobust
