#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "crnrobust/ltl.hpp"
#include "crnrobust/model.hpp"
#include "crnrobust/odesim.hpp"

namespace testsupport {

inline std::string data(const std::string& name) { return std::string(CRN_DATA_DIR) + "/" + name; }

inline crnrobust::Trace make_trace(const std::vector<std::string>& species, const std::vector<std::vector<double>>& x) {
    crnrobust::Trace t;
    t.species = species;
    for (std::size_t i = 0; i < x.size(); ++i)
        t.states.push_back({static_cast<double>(i), x[i], std::vector<double>(species.size(), 0.0)});
    return t;
}

inline crnrobust::Trace single(const std::vector<double>& b) {
    std::vector<std::vector<double>> x;
    for (double v : b) x.push_back({v});
    return make_trace({"B"}, x);
}

/// Random network over `n` species with up to 3 reactants/products and up to 1 modifier.
inline crnrobust::ReactionNetwork random_network(std::mt19937_64& rng, std::size_t n, std::size_t reactions) {
    using namespace crnrobust;
    std::vector<Species> sp;
    for (std::size_t i = 0; i < n; ++i)
        sp.push_back({"S" + std::to_string(i), std::uniform_real_distribution<double>(0.0, 2.0)(rng), std::nullopt});
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> count(0, 2);
    std::uniform_int_distribution<int> coeff(1, 2);
    std::vector<Reaction> rs;
    for (std::size_t r = 0; r < reactions; ++r) {
        Reaction re;
        re.rate = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
        auto add = [&](std::vector<StoichTerm>& terms) {
            const int c = count(rng);
            for (int k = 0; k < c; ++k) {
                const auto s = pick(rng);
                bool dup = false;
                for (const auto& t : terms) dup = dup || t.species == s;
                if (!dup) terms.push_back({s, coeff(rng)});
            }
        };
        add(re.reactants);
        add(re.products);
        if (re.reactants.empty() && re.products.empty()) re.reactants.push_back({pick(rng), 1});
        if (count(rng) == 0) {
            const auto m = pick(rng);
            if (re.reactant_coeff(m) == 0 && re.product_coeff(m) == 0) re.modifiers.push_back(m);
        }
        rs.push_back(std::move(re));
    }
    return ReactionNetwork(std::move(sp), std::move(rs));
}

}  // namespace testsupport
