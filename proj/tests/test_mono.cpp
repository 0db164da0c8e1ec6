#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "crnrobust/mono.hpp"
#include "crnrobust/report_json.hpp"
#include "support.hpp"

using namespace crnrobust;

namespace {

ReactionNetwork net_of(const std::string& reactions, const std::string& species) {
    return parse_network(R"({"species": [)" + species + R"(], "reactions": [)" + reactions + "]}");
}

const char* kABC = R"({"name":"A","initial":1},{"name":"B","initial":0},{"name":"C","initial":0})";

RGraph random_graph(std::mt19937_64& rng, std::size_t n) {
    RGraph g;
    g.nodes = n;
    std::uniform_int_distribution<int> pick(0, 9);
    const int density = 1 + static_cast<int>(rng() % 4);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const int v = pick(rng);
            if (v < density) g.e_plus.emplace(i, j);
            else if (v < 2 * density) g.e_minus.emplace(i, j);
        }
    return g;
}

bool brute_force_consistent(const RGraph& g) {
    for (std::uint32_t mask = 0; mask < (1u << g.nodes); ++mask) {
        Labeling s(g.nodes);
        for (std::size_t i = 0; i < g.nodes; ++i) s[i] = (mask >> i) & 1u ? -1 : 1;
        if (is_consistent(g, s)) return true;
    }
    return false;
}

Labeling flip(Labeling s) {
    for (auto& v : s) v = -v;
    return s;
}

}  // namespace

TEST_CASE("r-graph edge rules") {
    const auto coop = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["B"],"products":["C"],"rate":1})", kABC);
    auto g = build_r_graph(coop);
    CHECK(g.e_plus == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}});
    CHECK(g.e_minus.empty());

    const auto compete = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["A"],"products":["C"],"rate":1})", kABC);
    g = build_r_graph(compete);
    CHECK(g.e_plus.empty());
    CHECK(g.e_minus == std::set<std::pair<std::size_t, std::size_t>>{{0, 1}});
    CHECK(consistent_labeling(g) == Labeling{1, -1});

    const auto shared_product = net_of(R"({"reactants":["A"],"products":["C"],"rate":1},{"reactants":["B"],"products":["C"],"rate":1})", kABC);
    CHECK(build_r_graph(shared_product).e_minus.size() == 1);

    const auto both = load_network(testsupport::data("inconclusive.json"));
    g = build_r_graph(both);
    CHECK(g.e_plus.size() == 1);
    CHECK(g.e_minus.size() == 1);
    CHECK_FALSE(consistent_labeling(g));
    const auto v = classify_monotonicity(both, "A", "C");
    CHECK(v.kind == MonotonicityKind::Inconclusive);
    CHECK(v.failed == FailedCondition::NoConsistentLabeling);
    CHECK_FALSE(v.witness);

    // a modifier never creates an edge
    const auto mod = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["C"],"products":["A"],"modifiers":["B"],"rate":1})", kABC);
    g = build_r_graph(mod);
    CHECK(g.e_plus.size() == 1);
    CHECK(g.e_minus.empty());

    RGraph triangle{3, {}, {{0, 1}, {0, 2}, {1, 2}}};
    CHECK_FALSE(consistent_labeling(triangle));
    RGraph isolated{4, {}, {}};
    CHECK(consistent_labeling(isolated) == Labeling{1, 1, 1, 1});
}

TEST_CASE("ERK sub-network R21, R23 is positively monotonic") {
    const auto erk = load_network(testsupport::data("erk.json"));
    const std::vector<std::string> names{"R21", "R23"};
    const auto sub = erk.subnetwork(names);
    const auto g = build_r_graph(sub);
    CHECK(g.e_plus.size() == 1);
    CHECK(g.e_minus.empty());
    const auto v = classify_monotonicity(sub, "Mek1", "PPMek1");
    CHECK(v.kind == MonotonicityKind::PositivelyMonotonic);
    CHECK(v.failed == FailedCondition::None);
    REQUIRE(v.witness);
    CHECK((*v.witness)[0] == (*v.witness)[1]);
    CHECK(v.p_in == -1);
    CHECK(v.p_out == 1);
    CHECK(sub.reactions()[*v.input_reaction].name == "R21");
    CHECK(sub.reactions()[*v.output_reaction].name == "R23");

    // R21 -E+- R23 -E+- R25 -E-- R21 is an odd cycle once reverses are added
    const auto full = classify_monotonicity(erk, "Mek1", "PPMek1");
    CHECK(full.kind == MonotonicityKind::Inconclusive);
    CHECK(full.failed == FailedCondition::NoConsistentLabeling);
    const auto fwd = erk.subnetwork(std::vector<std::string>{"R21", "R27"});
    const auto twice = classify_monotonicity(fwd, "Mek1", "PMek1");
    CHECK(twice.failed == FailedCondition::InputInvolvement);
    CHECK(twice.reason.find("2 reactions") != std::string::npos);
}

TEST_CASE("classification failures in order") {
    const auto chain = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["B"],"products":["C"],"rate":1})", kABC);
    CHECK(classify_monotonicity(chain, "A", "C").kind == MonotonicityKind::PositivelyMonotonic);
    const auto out = classify_monotonicity(chain, "A", "B");
    CHECK(out.failed == FailedCondition::OutputInvolvement);

    const auto catalytic = net_of(R"({"reactants":["A","B"],"products":["B","C"],"rate":1})", kABC);
    const auto z = classify_monotonicity(catalytic, "B", "C");
    CHECK(z.failed == FailedCondition::ZeroProduct);
    CHECK(z.reason.find("input") != std::string::npos);

    const auto compete = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["C"],"products":["B"],"rate":1})", kABC);
    // A -> B and C -> B share B, so C and A push B in the same way but are
    // labeled oppositely; the input C feeds R1 with sign -1.
    const auto n = classify_monotonicity(compete, "C", "A");
    CHECK(n.failed == FailedCondition::None);
    CHECK(n.kind == MonotonicityKind::PositivelyMonotonic);

    const auto decay = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["A"],"products":["C"],"rate":1})", kABC);
    CHECK(classify_monotonicity(decay, "A", "C").failed == FailedCondition::InputInvolvement);

    const auto neg = net_of(R"({"reactants":["A","B"],"products":["C"],"rate":1})", kABC);
    CHECK(classify_monotonicity(neg, "A", "B").kind == MonotonicityKind::NegativelyMonotonic);

    const auto apart = net_of(R"({"reactants":["A"],"products":["B"],"rate":1},{"reactants":["C"],"products":[],"modifiers":["B"],"rate":1})", kABC);
    const auto d = classify_monotonicity(apart, "A", "C");
    CHECK(d.failed == FailedCondition::Disconnected);
    CHECK(d.reason.find("different components") != std::string::npos);

    CHECK_THROWS_AS(classify_monotonicity(chain, "A", "A"), std::invalid_argument);
    CHECK_THROWS_AS(classify_monotonicity(chain, "Q", "A"), std::invalid_argument);
    CHECK_THROWS_AS(classify_with_labeling(decay, "A", "B", Labeling{1, 1}), std::invalid_argument);
}

TEST_CASE("consistent labeling agrees with brute force") {
    std::mt19937_64 rng(2024);
    int with = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto g = random_graph(rng, 1 + trial % 12);
        const auto s = consistent_labeling(g);
        CHECK(s.has_value() == brute_force_consistent(g));
        if (s) {
            ++with;
            CHECK(is_consistent(g, *s));
            CHECK(is_consistent(g, flip(*s)));
            CHECK(s->front() == 1);
        }
    }
    CHECK(with > 20);
}

TEST_CASE("classification is invariant under a global sign flip and reordering") {
    std::mt19937_64 rng(77);
    int monotone = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto net = testsupport::random_network(rng, 3 + trial % 3, 1 + trial % 4);
        const auto sigma = consistent_labeling(build_r_graph(net));
        const auto names = net.species_names();
        for (std::size_t a = 0; a < names.size(); ++a)
            for (std::size_t b = 0; b < names.size(); ++b) {
                if (a == b) continue;
                const auto v = classify_monotonicity(net, names[a], names[b]);
                if (v.monotone()) ++monotone;
                if (!sigma) continue;
                const auto w = classify_with_labeling(net, names[a], names[b], flip(*sigma));
                CHECK(w.kind == v.kind);
                CHECK(w.failed == v.failed);
                if (v.monotone()) CHECK(w.p_in == -v.p_in);
            }
        // reversed reaction order
        std::vector<std::string> rev;
        for (const auto& r : net.reactions()) rev.insert(rev.begin(), r.name);
        const auto back = net.subnetwork(rev);
        // reversed species order
        auto sp = net.species();
        std::reverse(sp.begin(), sp.end());
        std::vector<Reaction> rs;
        for (auto r : net.reactions()) {
            for (auto& t : r.reactants) t.species = sp.size() - 1 - t.species;
            for (auto& t : r.products) t.species = sp.size() - 1 - t.species;
            for (auto& m : r.modifiers) m = sp.size() - 1 - m;
            rs.push_back(r);
        }
        const ReactionNetwork mirrored(sp, rs);
        for (std::size_t a = 0; a < names.size(); ++a)
            for (std::size_t b = 0; b < names.size(); ++b) {
                if (a == b) continue;
                const auto v = classify_monotonicity(net, names[a], names[b]);
                CHECK(classify_monotonicity(back, names[a], names[b]).kind == v.kind);
                CHECK(classify_monotonicity(mirrored, names[a], names[b]).kind == v.kind);
            }
    }
    CHECK(monotone > 50);
}

namespace {

/// No species on both sides of a reaction and no modifiers.
bool plain(const ReactionNetwork& net) {
    for (const auto& r : net.reactions()) {
        if (!r.modifiers.empty()) return false;
        for (const auto& t : r.reactants)
            if (r.product_coeff(t.species) > 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("certified signs agree with simulation on non-autocatalytic networks") {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 2000 && checked < 40; ++trial) {
        const auto net = testsupport::random_network(rng, 3, 1 + trial % 3);
        if (!plain(net)) continue;
        const auto names = net.species_names();
        const auto odes = derive_odes(net);
        for (std::size_t a = 0; a < names.size(); ++a)
            for (std::size_t b = 0; b < names.size(); ++b) {
                if (a == b) continue;
                const auto v = classify_monotonicity(net, names[a], names[b]);
                if (!v.monotone()) continue;
                auto lo = net.initial_state();
                auto hi = lo;
                hi[a] += 0.5;
                const auto o = SimOptions::for_horizon(2.0, 11);
                Trace tl, th;
                try {
                    tl = simulate(odes, lo, o);
                    th = simulate(odes, hi, o);
                } catch (const SimulationError&) {
                    continue;
                }
                for (std::size_t k = 0; k < tl.size(); ++k) {
                    const double d = th.states[k].x[b] - tl.states[k].x[b];
                    if (v.kind == MonotonicityKind::PositivelyMonotonic)
                        CHECK(d >= -1e-7);
                    else
                        CHECK(d <= 1e-7);
                }
                ++checked;
            }
    }
    CHECK(checked >= 20);
}

TEST_CASE("ERK chain composes to a positive verdict") {
    const auto erk = load_network(testsupport::data("erk.json"));
    const auto steps = load_chain(testsupport::data("erk_chain.json"));
    REQUIRE(steps.size() == 2);
    const auto cv = classify_chain(erk, steps);
    CHECK(cv.kind == MonotonicityKind::PositivelyMonotonic);
    CHECK(cv.failed == FailedCondition::None);
    REQUIRE(cv.steps.size() == 2);
    CHECK(cv.steps[0].kind == MonotonicityKind::PositivelyMonotonic);

    auto broken = steps;
    broken[0].output = "Raf";
    broken[0].input = "PRaf";
    const auto bad = classify_chain(erk, broken);
    CHECK(bad.kind == MonotonicityKind::Inconclusive);
    CHECK(bad.failed == FailedCondition::ChainLink);

    auto failing = steps;
    failing[1].reactions.clear();
    const auto f = classify_chain(erk, failing);
    CHECK(f.failed == FailedCondition::NoConsistentLabeling);
    CHECK(f.reason.rfind("step 2", 0) == 0);

    CHECK_THROWS_AS(parse_chain("{}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_chain(R"([{"input": "A"}])"), std::invalid_argument);
    CHECK_THROWS_AS(parse_chain("[1"), std::invalid_argument);
    CHECK_THROWS_AS(load_chain("/nonexistent.json"), std::invalid_argument);
    CHECK_THROWS_AS(classify_chain(erk, {}), std::invalid_argument);
}

TEST_CASE("endpoint verification on the conversion network") {
    const auto net = load_network(testsupport::data("conversion.json"));
    const auto v = classify_monotonicity(net, "A", "B");
    REQUIRE(v.kind == MonotonicityKind::PositivelyMonotonic);
    const auto sim = SimOptions::for_horizon(100);
    const auto r = endpoint_verification(net, "A", Interval(1, 2), "B", 1.001, sim, v.kind);
    CHECK(r.probes.size() == 2);
    CHECK(r.spread == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.observed_min == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.robust);
    CHECK_FALSE(r.approximate);
    CHECK(r.strategy_used == "monotone_endpoints");
    CHECK(r == serial::endpoint_verification(net, "A", Interval(1, 2), "B", 1.001, sim, v.kind));
    CHECK_FALSE(endpoint_verification(net, "A", Interval(1, 2), "B", 0.5, sim, v.kind).robust);

    // a negative verdict swaps the envelope ends
    const auto neg = endpoint_verification(net, "A", Interval(1, 2), "B", 2, sim, MonotonicityKind::NegativelyMonotonic);
    CHECK(neg.observed_min > neg.observed_max);

    CHECK_THROWS_AS(endpoint_verification(net, "A", Interval(1, 2), "B", 1, sim, MonotonicityKind::Inconclusive),
                    std::invalid_argument);
    CHECK_THROWS_AS(endpoint_verification(net, "A", Interval(1, kInfinity), "B", 1, sim, v.kind),
                    std::invalid_argument);
}

TEST_CASE("DOT rendering") {
    const auto both = load_network(testsupport::data("inconclusive.json"));
    const auto dot = to_dot(both, build_r_graph(both), std::nullopt);
    CHECK(dot.rfind("graph rgraph {", 0) == 0);
    CHECK(dot.find("r0 -- r1 [style=solid];") != std::string::npos);
    CHECK(dot.find("r0 -- r1 [style=dashed];") != std::string::npos);
    const auto erk = load_network(testsupport::data("erk.json")).subnetwork(std::vector<std::string>{"R21", "R23"});
    const auto g = build_r_graph(erk);
    CHECK(to_dot(erk, g, consistent_labeling(g)).find("label=\"R21 (+)\"") != std::string::npos);
}

TEST_CASE("verdict JSON") {
    const auto erk = load_network(testsupport::data("erk.json")).subnetwork(std::vector<std::string>{"R21", "R23"});
    const auto v = classify_monotonicity(erk, "Mek1", "PPMek1");
    const nlohmann::json j = v;
    CHECK(j["kind"] == "PositivelyMonotonic");
    const auto back = j.get<MonotonicityVerdict>();
    CHECK(back.kind == v.kind);
    CHECK(back.witness == v.witness);
    CHECK(back.p_in == v.p_in);
    CHECK(back.input_reaction == v.input_reaction);
    const auto full = verdict_json(erk, v);
    CHECK(full["labels"]["R21"] == "+");
    CHECK(full["r_graph"]["e_plus"].size() == 1);
}
