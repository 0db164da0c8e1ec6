#include "crnrobust/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace crnrobust {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (std::isnan(lo) || std::isnan(hi))
        throw std::invalid_argument("interval bound is NaN");
    if (lo < 0.0)
        throw std::invalid_argument("interval lower bound must be nonnegative");
    if (lo > hi)
        throw std::invalid_argument("interval lower bound exceeds upper bound");
}

int Reaction::reactant_coeff(std::size_t species) const noexcept {
    int c = 0;
    for (const auto& t : reactants)
        if (t.species == species) c += t.coeff;
    return c;
}

int Reaction::product_coeff(std::size_t species) const noexcept {
    int c = 0;
    for (const auto& t : products)
        if (t.species == species) c += t.coeff;
    return c;
}

bool Reaction::has_modifier(std::size_t species) const noexcept {
    return std::find(modifiers.begin(), modifiers.end(), species) != modifiers.end();
}

ReactionNetwork::ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
    std::set<std::string_view> seen;
    for (std::size_t j = 0; j < species_.size(); ++j) {
        const auto& s = species_[j];
        const auto where = "/species/" + std::to_string(j);
        if (s.name.empty()) throw ModelError(where + "/name", "empty species name");
        if (!seen.insert(s.name).second) throw ModelError(where + "/name", "duplicate species name '" + s.name + "'");
        if (!(s.initial >= 0.0) || !std::isfinite(s.initial))
            throw ModelError(where + "/initial", "initial concentration must be finite and nonnegative");
    }
    std::set<std::string_view> reaction_names;
    for (std::size_t i = 0; i < reactions_.size(); ++i) {
        auto& r = reactions_[i];
        const auto where = "/reactions/" + std::to_string(i);
        if (r.name.empty()) r.name = "R" + std::to_string(i);
        if (!reaction_names.insert(r.name).second)
            throw ModelError(where + "/name", "duplicate reaction name '" + r.name + "'");
        if (r.reactants.empty() && r.products.empty())
            throw ModelError(where, "reaction has neither reactants nor products");
        if (!(r.rate >= 0.0) || !std::isfinite(r.rate))
            throw ModelError(where + "/rate", "rate must be finite and nonnegative");
        auto check_terms = [&](const std::vector<StoichTerm>& terms, const char* field) {
            for (std::size_t k = 0; k < terms.size(); ++k) {
                const auto loc = where + "/" + field + "/" + std::to_string(k);
                if (terms[k].species >= species_.size()) throw ModelError(loc, "undeclared species");
                if (terms[k].coeff < 1) throw ModelError(loc, "stoichiometric coefficient must be >= 1");
            }
        };
        check_terms(r.reactants, "reactants");
        check_terms(r.products, "products");
        for (std::size_t k = 0; k < r.modifiers.size(); ++k) {
            const auto loc = where + "/modifiers/" + std::to_string(k);
            const auto m = r.modifiers[k];
            if (m >= species_.size()) throw ModelError(loc, "undeclared species");
            if (r.involves(m))
                throw ModelError(loc, "modifier '" + species_[m].name + "' also appears as reactant or product");
        }
    }
}

std::optional<std::size_t> ReactionNetwork::find_species(std::string_view name) const {
    for (std::size_t j = 0; j < species_.size(); ++j)
        if (species_[j].name == name) return j;
    return std::nullopt;
}

std::optional<std::size_t> ReactionNetwork::find_reaction(std::string_view name) const {
    for (std::size_t i = 0; i < reactions_.size(); ++i)
        if (reactions_[i].name == name) return i;
    return std::nullopt;
}

std::size_t ReactionNetwork::species_index(std::string_view name) const {
    if (auto j = find_species(name)) return *j;
    throw ModelError("", "unknown species '" + std::string(name) + "'");
}

std::size_t ReactionNetwork::reaction_index(std::string_view name) const {
    if (auto i = find_reaction(name)) return *i;
    throw ModelError("", "unknown reaction '" + std::string(name) + "'");
}

std::vector<double> ReactionNetwork::initial_state() const {
    std::vector<double> x;
    x.reserve(species_.size());
    for (const auto& s : species_) x.push_back(s.initial);
    return x;
}

std::vector<std::string> ReactionNetwork::species_names() const {
    std::vector<std::string> names;
    names.reserve(species_.size());
    for (const auto& s : species_) names.push_back(s.name);
    return names;
}

ReactionNetwork ReactionNetwork::subnetwork(std::span<const std::string> reaction_names) const {
    std::vector<Reaction> picked;
    for (const auto& n : reaction_names) picked.push_back(reactions_[reaction_index(n)]);
    return ReactionNetwork(species_, std::move(picked));
}

StoichiometricMatrix stoichiometric_matrix(const ReactionNetwork& net) {
    StoichiometricMatrix gamma(net.num_species(), net.num_reactions());
    for (std::size_t i = 0; i < net.num_reactions(); ++i) {
        const auto& r = net.reactions()[i];
        for (const auto& t : r.reactants) gamma(t.species, i) -= t.coeff;
        for (const auto& t : r.products) gamma(t.species, i) += t.coeff;
    }
    return gamma;
}

std::vector<double> reaction_fluxes(const ReactionNetwork& net, std::span<const double> x) {
    std::vector<double> v(net.num_reactions());
    for (std::size_t i = 0; i < net.num_reactions(); ++i) {
        const auto& r = net.reactions()[i];
        double flux = r.rate;
        for (const auto& t : r.reactants) flux *= std::pow(x[t.species], t.coeff);
        for (auto m : r.modifiers) flux *= x[m];
        v[i] = flux;
    }
    return v;
}

ODESystem derive_odes(const ReactionNetwork& net) {
    const auto gamma = stoichiometric_matrix(net);
    std::vector<std::vector<Monomial>> rhs(net.num_species());
    for (std::size_t i = 0; i < net.num_reactions(); ++i) {
        const auto& r = net.reactions()[i];
        // Repeated reactant entries collapse into one factor.
        std::vector<Factor> factors;
        auto add_factor = [&](std::size_t s, int e) {
            for (auto& f : factors)
                if (f.species == s) {
                    f.exponent += e;
                    return;
                }
            factors.push_back({s, e});
        };
        for (const auto& t : r.reactants) add_factor(t.species, t.coeff);
        for (auto m : r.modifiers) add_factor(m, 1);
        for (std::size_t j = 0; j < net.num_species(); ++j) {
            const int g = gamma(j, i);
            if (g == 0) continue;
            rhs[j].push_back(Monomial{i, static_cast<double>(g), r.rate, factors});
        }
    }
    return ODESystem(net.species_names(), std::move(rhs));
}

void ODESystem::evaluate(std::span<const double> x, std::span<double> xdot) const {
    for (std::size_t j = 0; j < rhs_.size(); ++j) {
        double acc = 0.0;
        for (const auto& m : rhs_[j]) {
            double term = m.signed_coeff * m.rate;
            for (const auto& f : m.factors) {
                const double c = x[f.species];
                switch (f.exponent) {
                    case 1: term *= c; break;
                    case 2: term *= c * c; break;
                    default: term *= std::pow(c, f.exponent); break;
                }
            }
            acc += term;
        }
        xdot[j] = acc;
    }
}

std::vector<double> ODESystem::evaluate(std::span<const double> x) const {
    std::vector<double> xdot(rhs_.size());
    evaluate(x, xdot);
    return xdot;
}

std::string ODESystem::to_string() const {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t j = 0; j < rhs_.size(); ++j) {
        os << "d[" << species_[j] << "]/dt =";
        if (rhs_[j].empty()) os << " 0";
        for (const auto& m : rhs_[j]) {
            os << (m.signed_coeff < 0 ? " - " : " + ") << std::abs(m.signed_coeff) << "*k" << m.reaction;
            for (const auto& f : m.factors) {
                os << "*[" << species_[f.species] << "]";
                if (f.exponent != 1) os << "^" << f.exponent;
            }
        }
        os << '\n';
    }
    return os.str();
}

IntervalMarking IntervalMarking::from_network(const ReactionNetwork& net) {
    std::vector<Interval> iv;
    iv.reserve(net.num_species());
    for (const auto& s : net.species()) iv.push_back(s.interval.value_or(Interval::point(s.initial)));
    return IntervalMarking(std::move(iv));
}

bool IntervalMarking::contains(std::span<const double> m) const {
    if (m.size() != intervals_.size()) return false;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!intervals_[i].contains(m[i])) return false;
    return true;
}

bool IntervalMarking::all_trivial() const {
    return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& v) { return v.trivial(); });
}

bool IntervalMarking::bounded() const {
    return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& v) { return v.bounded(); });
}

std::vector<std::size_t> IntervalMarking::nontrivial_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < intervals_.size(); ++i)
        if (!intervals_[i].trivial()) idx.push_back(i);
    return idx;
}

std::vector<double> IntervalMarking::lower_corner() const {
    std::vector<double> m;
    m.reserve(intervals_.size());
    for (const auto& v : intervals_) m.push_back(v.lo());
    return m;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_uniform(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform_law(const Interval& iv, Rng& rng) {
    const double u = unit_uniform(rng);
    const double v = iv.lo() + (iv.hi() - iv.lo()) * u;
    return std::min(v, iv.hi());
}

std::vector<double> sample_marking(const IntervalMarking& im, std::uint64_t seed) {
    return sample_marking(im, seed, uniform_law);
}

std::vector<double> sample_marking(const IntervalMarking& im, std::uint64_t seed, const PerturbationLaw& law) {
    for (std::size_t i = 0; i < im.size(); ++i)
        if (!im[i].bounded())
            throw std::invalid_argument("cannot sample interval " + std::to_string(i) + " with unbounded upper limit");
    Rng rng(seed);
    std::vector<double> m(im.size());
    for (std::size_t i = 0; i < im.size(); ++i) {
        // Every coordinate consumes one draw so streams stay aligned.
        m[i] = im[i].trivial() ? (static_cast<void>(rng()), im[i].lo()) : law(im[i], rng);
    }
    return m;
}

}  // namespace crnrobust
