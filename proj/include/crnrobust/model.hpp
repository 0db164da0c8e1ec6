#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crnrobust {

/// Thrown for malformed model documents and invalid network construction.
/// `where()` holds a JSON-pointer style location such as `/reactions/2/rate`.
class ModelError : public std::runtime_error {
public:
    ModelError(std::string where, const std::string& what)
        : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)), message_(what) {}
    const std::string& where() const noexcept { return where_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string where_;
    std::string message_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi] of nonnegative reals, hi possibly +inf.
class Interval {
public:
    Interval() = default;
    Interval(double lo, double hi);
    static Interval point(double v) { return Interval(v, v); }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    bool trivial() const noexcept { return lo_ == hi_; }
    bool bounded() const noexcept { return hi_ != kInfinity; }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    double width() const noexcept { return hi_ - lo_; }

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

struct Species {
    std::string name;
    double initial = 0.0;
    /// Present when the document marks the species as a perturbed input.
    std::optional<Interval> interval;

    friend bool operator==(const Species&, const Species&) = default;
};

struct StoichTerm {
    std::size_t species = 0;
    int coeff = 1;

    friend bool operator==(const StoichTerm&, const StoichTerm&) = default;
};

/// Irreversible mass-action reaction. Modifiers scale the flux with exponent 1
/// and have zero stoichiometry.
struct Reaction {
    std::string name;
    std::vector<StoichTerm> reactants;
    std::vector<StoichTerm> products;
    std::vector<std::size_t> modifiers;
    double rate = 0.0;

    int reactant_coeff(std::size_t species) const noexcept;
    int product_coeff(std::size_t species) const noexcept;
    bool has_modifier(std::size_t species) const noexcept;
    /// Reactant or product (modifier occurrences do not count).
    bool involves(std::size_t species) const noexcept {
        return reactant_coeff(species) > 0 || product_coeff(species) > 0;
    }

    friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// Canonical chemical reaction network: every reaction irreversible, every
/// referenced species declared. Equivalently the continuous Petri net with
/// places = species, transitions = reactions, arc weights = stoichiometry,
/// transition rates = kinetic constants and m0 = declared initials.
class ReactionNetwork {
public:
    ReactionNetwork() = default;
    /// Validates all invariants; throws ModelError.
    ReactionNetwork(std::vector<Species> species, std::vector<Reaction> reactions);

    const std::vector<Species>& species() const noexcept { return species_; }
    const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
    std::size_t num_species() const noexcept { return species_.size(); }
    std::size_t num_reactions() const noexcept { return reactions_.size(); }

    std::optional<std::size_t> find_species(std::string_view name) const;
    std::optional<std::size_t> find_reaction(std::string_view name) const;
    /// Throws ModelError for unknown names.
    std::size_t species_index(std::string_view name) const;
    std::size_t reaction_index(std::string_view name) const;

    std::vector<double> initial_state() const;
    std::vector<std::string> species_names() const;

    /// Network restricted to the named reactions (in the given order); keeps
    /// every species declaration so indices stay comparable.
    ReactionNetwork subnetwork(std::span<const std::string> reaction_names) const;

    friend bool operator==(const ReactionNetwork&, const ReactionNetwork&) = default;

private:
    std::vector<Species> species_;
    std::vector<Reaction> reactions_;
};

/// Parses the JSON model document. Reversible declarations (`reverse_rate`)
/// expand into a forward and a backward irreversible reaction.
ReactionNetwork parse_network(std::string_view text);
ReactionNetwork load_network(const std::string& path);
/// Canonical JSON document (irreversible reactions only); re-parses to an
/// identical network.
std::string serialize_network(const ReactionNetwork& net);

/// Dense species x reactions matrix of net production coefficients.
class StoichiometricMatrix {
public:
    StoichiometricMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    int operator()(std::size_t species, std::size_t reaction) const { return data_[species * cols_ + reaction]; }
    int& operator()(std::size_t species, std::size_t reaction) { return data_[species * cols_ + reaction]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<int> data_;
};

StoichiometricMatrix stoichiometric_matrix(const ReactionNetwork& net);

/// Mass-action flux k_i * prod x^stoich * prod modifiers, one per reaction.
std::vector<double> reaction_fluxes(const ReactionNetwork& net, std::span<const double> x);

struct Factor {
    std::size_t species = 0;
    int exponent = 1;
};

/// signed_coeff * k * prod x[f.species]^f.exponent
struct Monomial {
    std::size_t reaction = 0;
    double signed_coeff = 0.0;
    double rate = 0.0;
    std::vector<Factor> factors;
};

/// Mass-action right-hand side, stored as one sum of monomials per species.
class ODESystem {
public:
    ODESystem() = default;
    ODESystem(std::vector<std::string> species, std::vector<std::vector<Monomial>> rhs)
        : species_(std::move(species)), rhs_(std::move(rhs)) {}

    std::size_t dimension() const noexcept { return species_.size(); }
    const std::vector<std::string>& species() const noexcept { return species_; }
    const std::vector<Monomial>& terms(std::size_t species) const { return rhs_[species]; }

    void evaluate(std::span<const double> x, std::span<double> xdot) const;
    std::vector<double> evaluate(std::span<const double> x) const;

    /// Human-readable `d[A]/dt = -1*k0*[A] + ...` lines.
    std::string to_string() const;

private:
    std::vector<std::string> species_;
    std::vector<std::vector<Monomial>> rhs_;
};

ODESystem derive_odes(const ReactionNetwork& net);

/// Species -> admissible initial concentration interval. Total over the network.
class IntervalMarking {
public:
    IntervalMarking() = default;
    explicit IntervalMarking(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}
    /// Declared intervals where present, trivial [initial, initial] elsewhere.
    static IntervalMarking from_network(const ReactionNetwork& net);

    std::size_t size() const noexcept { return intervals_.size(); }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    void set(std::size_t i, Interval v) { intervals_.at(i) = v; }

    bool contains(std::span<const double> m) const;
    bool all_trivial() const;
    bool bounded() const;
    std::vector<std::size_t> nontrivial_indices() const;
    std::vector<double> lower_corner() const;

private:
    std::vector<Interval> intervals_;
};

/// Deterministic 64-bit generator used for every perturbation draw.
using Rng = std::mt19937_64;

/// Mixes a base seed with a stream index (SplitMix64 finalizer) so that
/// per-sample streams are independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_uniform(Rng& rng) noexcept;

/// Draws one coordinate from an interval. Perturbation-law hook.
using PerturbationLaw = std::function<double(const Interval&, Rng&)>;

double uniform_law(const Interval& iv, Rng& rng);

/// Draws a concrete marking m in im, coordinates independent. Trivial intervals
/// return their point exactly. Throws std::invalid_argument for unbounded
/// non-trivial intervals.
std::vector<double> sample_marking(const IntervalMarking& im, std::uint64_t seed);
std::vector<double> sample_marking(const IntervalMarking& im, std::uint64_t seed, const PerturbationLaw& law);

}  // namespace crnrobust
