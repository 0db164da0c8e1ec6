#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "crnrobust/model.hpp"
#include "support.hpp"

using namespace crnrobust;

namespace {

ModelError parse_error(const std::string& text) {
    try {
        parse_network(text);
    } catch (const ModelError& e) {
        return e;
    }
    FAIL("expected a ModelError");
    return ModelError("", "");
}

const char* kTwoSpecies = R"({"species": [{"name": "A", "initial": 1}, {"name": "B", "initial": 0}], "reactions": [%s]})";

std::string with_reactions(const std::string& r) {
    std::string s = kTwoSpecies;
    s.replace(s.find("%s"), 2, r);
    return s;
}

}  // namespace

TEST_CASE("ERK model: species, canonical reactions, modifiers") {
    const auto net = load_network(testsupport::data("erk.json"));
    REQUIRE(net.num_species() == 5);
    REQUIRE(net.num_reactions() == 6);
    const std::vector<std::string> names{"R18", "R19", "R21", "R27", "R23", "R25"};
    for (std::size_t i = 0; i < names.size(); ++i) CHECK(net.reactions()[i].name == names[i]);
    CHECK(net.species()[net.species_index("Raf")].initial == 10.0);
    CHECK(net.reactions()[net.reaction_index("R23")].rate == 667.957);

    const auto praf = net.species_index("PRaf");
    CHECK(net.reactions()[net.reaction_index("R21")].has_modifier(praf));
    CHECK(net.reactions()[net.reaction_index("R27")].modifiers.empty());
    // R19 is the reverse of R18
    const auto& r19 = net.reactions()[net.reaction_index("R19")];
    CHECK(r19.reactant_coeff(praf) == 1);
    CHECK(r19.product_coeff(net.species_index("Raf")) == 1);

    const auto m = IntervalMarking::from_network(net);
    CHECK(m[0] == Interval(1, 100));
    CHECK(m.nontrivial_indices() == std::vector<std::size_t>{0});
    CHECK(m[2].trivial());
}

TEST_CASE("stoichiometric matrix of A + 2B -> C and the modifier column") {
    const auto net = parse_network(R"({"species": [{"name":"A","initial":1},{"name":"B","initial":1},
        {"name":"C","initial":0},{"name":"E","initial":1}],
        "reactions": [{"reactants": [["A",1],["B",2]], "products": ["C"], "modifiers": ["E"], "rate": 2}]})");
    const auto g = stoichiometric_matrix(net);
    CHECK(g(0, 0) == -1);
    CHECK(g(1, 0) == -2);
    CHECK(g(2, 0) == 1);
    CHECK(g(3, 0) == 0);
    CHECK(net.reactions()[0].name == "R0");

    const std::vector<double> x{0.5, 3.0, 0.0, 0.25};
    CHECK(reaction_fluxes(net, x)[0] == doctest::Approx(2 * 0.5 * 9.0 * 0.25));
    const auto xd = derive_odes(net).evaluate(x);
    CHECK(xd[3] == 0.0);
    CHECK(xd[1] == doctest::Approx(-2 * 2 * 0.5 * 9.0 * 0.25));
}

TEST_CASE("derived ODEs equal Gamma * v on random networks") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto net = testsupport::random_network(rng, 1 + trial % 6, 1 + trial % 5);
        const auto odes = derive_odes(net);
        const auto g = stoichiometric_matrix(net);
        std::vector<double> x(net.num_species());
        for (auto& v : x) v = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
        const auto v = reaction_fluxes(net, x);
        const auto xd = odes.evaluate(x);
        for (std::size_t j = 0; j < net.num_species(); ++j) {
            double expect = 0.0;
            for (std::size_t i = 0; i < net.num_reactions(); ++i) expect += g(j, i) * v[i];
            CHECK(xd[j] == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
        }
        for (std::size_t j = 0; j < net.num_species(); ++j)
            for (const auto& mono : odes.terms(j)) {
                CHECK(mono.signed_coeff == g(j, mono.reaction));
                CHECK(mono.signed_coeff != 0.0);
            }
    }
}

TEST_CASE("ODE text form") {
    const auto net = parse_network(with_reactions(R"({"reactants": ["A"], "products": ["B"], "rate": 1})"));
    const auto s = derive_odes(net).to_string();
    CHECK(s.find("d[A]/dt") != std::string::npos);
    CHECK(s.find("d[B]/dt") != std::string::npos);
    CHECK(s.find("[A]") != std::string::npos);
}

TEST_CASE("model document errors carry a location") {
    CHECK(parse_error(with_reactions(R"({"reactants": ["A"], "products": ["B"]})")).where() == "/reactions/0");
    CHECK(parse_error(with_reactions(R"({"reactants": ["Z"], "products": ["B"], "rate": 1})")).where() ==
          "/reactions/0/reactants/0");
    CHECK(parse_error(with_reactions(R"({"reactants": [["A", 1.5]], "products": ["B"], "rate": 1})")).where() ==
          "/reactions/0/reactants/0/1");
    CHECK(parse_error(with_reactions(R"({"reactants": ["A"], "products": ["B"], "rate": -1})")).where() ==
          "/reactions/0/rate");
    CHECK(parse_error(with_reactions(R"({"reactants": ["A"], "products": ["B"], "rate": 1, "reverse_name": "x"})"))
              .where() == "/reactions/0");
    CHECK(parse_error(with_reactions(R"({"reactants": [], "products": [], "rate": 1})")).where() == "/reactions/0");
    CHECK(parse_error(with_reactions(R"({"reactants": ["A"], "products": ["B"], "modifiers": ["A"], "rate": 1})"))
              .message()
              .find("modifier") != std::string::npos);
    CHECK(parse_error(R"({"species": [{"name": "A", "initial": 1, "interval": [3, 2]}]})").where() ==
          "/species/0/interval");
    CHECK(parse_error(R"({"species": [{"name": "A", "initial": -1}]})").where() == "/species/0/initial");
    CHECK(parse_error(R"({"species": [{"name": "A", "initial": 1}, {"name": "A", "initial": 1}]})").where() ==
          "/species/1/name");
    CHECK(parse_error(R"({"species": [)").where().rfind("byte", 0) == 0);
    CHECK(parse_error("[]").message().find("object") != std::string::npos);
}

TEST_CASE("load_network reports the path") {
    try {
        load_network("/nonexistent/model.json");
        FAIL("expected an error");
    } catch (const ModelError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/model.json") != std::string::npos);
    }
}

TEST_CASE("reversible declarations and reverse modifiers") {
    const auto net = parse_network(R"({"species": [{"name": "A", "initial": 1}, {"name": "B", "initial": 0},
        {"name": "E", "initial": 1}], "reactions": [{"name": "f", "reactants": ["A"], "products": ["B"], "rate": 1,
        "modifiers": ["E"], "reverse_rate": 2, "reverse_modifiers": ["E"]},
        {"name": "g", "reactants": ["A"], "products": ["B"], "modifiers": ["E"], "rate": 1, "reverse_rate": 3}]})");
    REQUIRE(net.num_reactions() == 4);
    CHECK(net.reactions()[1].name == "f_rev");
    CHECK(net.reactions()[1].rate == 2.0);
    CHECK(net.reactions()[1].has_modifier(2));
    CHECK(net.reactions()[0].has_modifier(2));
    // forward modifiers are not inherited by the reverse reaction
    CHECK(net.reactions()[3].name == "g_rev");
    CHECK(net.reactions()[3].modifiers.empty());
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto net = testsupport::random_network(rng, 1 + trial % 5, trial % 4);
        CHECK(parse_network(serialize_network(net)) == net);
    }
    const auto erk = load_network(testsupport::data("erk.json"));
    CHECK(parse_network(serialize_network(erk)) == erk);
    const auto unb = parse_network(R"({"species": [{"name": "A", "initial": 1, "interval": [0, "inf"]}]})");
    CHECK_FALSE(unb.species()[0].interval->bounded());
    CHECK(parse_network(serialize_network(unb)) == unb);
}

TEST_CASE("subnetwork keeps species and picks reactions in order") {
    const auto net = load_network(testsupport::data("erk.json"));
    const std::vector<std::string> pick{"R23", "R21"};
    const auto sub = net.subnetwork(pick);
    CHECK(sub.num_species() == 5);
    REQUIRE(sub.num_reactions() == 2);
    CHECK(sub.reactions()[0].name == "R23");
    const std::vector<std::string> bad{"R99"};
    CHECK_THROWS_AS(net.subnetwork(bad), ModelError);
}

TEST_CASE("intervals") {
    CHECK_THROWS(Interval(-1, 2));
    CHECK_THROWS(Interval(3, 2));
    CHECK_THROWS(Interval(std::nan(""), 2));
    CHECK(Interval(1, kInfinity).contains(1e300));
    CHECK_FALSE(Interval(1, kInfinity).bounded());
    CHECK(Interval::point(4).trivial());
    CHECK(Interval(1, 3).width() == 2.0);
}

TEST_CASE("sampling: bounds, determinism, trivial coordinates") {
    IntervalMarking m({Interval(1, 100), Interval::point(0.5), Interval(0, 1e-3)});
    const auto a = sample_marking(m, 42);
    CHECK(a == sample_marking(m, 42));
    CHECK(a != sample_marking(m, 43));
    CHECK(a[1] == 0.5);
    for (std::uint64_t s = 0; s < 500; ++s) CHECK(m.contains(sample_marking(m, derive_seed(9, s))));
    CHECK_THROWS_AS(sample_marking(IntervalMarking({Interval(0, kInfinity)}), 1), std::invalid_argument);

    // Trivial coordinates still consume a draw: the last coordinate is the
    // same whether or not the first is trivial.
    IntervalMarking p({Interval::point(2), Interval(0, 1)});
    IntervalMarking q({Interval(0, 1), Interval(0, 1)});
    CHECK(sample_marking(p, 5)[1] == sample_marking(q, 5)[1]);

    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = unit_uniform(rng);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(0, s));
    CHECK(seen.size() == 1000);
}

TEST_CASE("custom perturbation law") {
    IntervalMarking m({Interval(1, 3)});
    const PerturbationLaw upper = [](const Interval& iv, Rng&) { return iv.hi(); };
    CHECK(sample_marking(m, 1, upper)[0] == 3.0);
}
