#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crnrobust/model.hpp"
#include "crnrobust/odesim.hpp"
#include "crnrobust/robust.hpp"

namespace crnrobust {

/// Signed graph over reaction indices. Pairs are stored as (i, j) with i < j.
struct RGraph {
    std::size_t nodes = 0;
    std::set<std::pair<std::size_t, std::size_t>> e_plus;
    std::set<std::pair<std::size_t, std::size_t>> e_minus;
};

/// E+: a product of one reaction is a reactant of the other. E-: a shared
/// reactant or a shared product. Modifiers are ignored.
RGraph build_r_graph(const ReactionNetwork& net);

/// +1 or -1 per reaction.
using Labeling = std::vector<int>;

/// Parity union-find over the edge constraints. The smallest node of every
/// component is labeled +1. Empty when no consistent labeling exists.
std::optional<Labeling> consistent_labeling(const RGraph& g);

bool is_consistent(const RGraph& g, const Labeling& sigma);

enum class MonotonicityKind { PositivelyMonotonic, NegativelyMonotonic, Inconclusive };

std::string_view to_string(MonotonicityKind k);

/// Disconnected: the input and output reactions lie in different components
/// of the R-graph, so their relative sign depends on the labeling chosen.
enum class FailedCondition {
    None,
    NoConsistentLabeling,
    InputInvolvement,
    OutputInvolvement,
    ZeroProduct,
    Disconnected,
    ChainLink,
};

std::string_view to_string(FailedCondition c);

struct MonotonicityVerdict {
    MonotonicityKind kind = MonotonicityKind::Inconclusive;
    FailedCondition failed = FailedCondition::None;
    std::string reason;
    std::string input;
    std::string output;
    std::optional<Labeling> witness;
    std::optional<std::size_t> input_reaction;
    std::optional<std::size_t> output_reaction;
    /// Gamma[input][i_I] * sigma(i_I), and the same for the output; 0 when not computed.
    int p_in = 0;
    int p_out = 0;

    bool monotone() const noexcept { return kind != MonotonicityKind::Inconclusive; }
};

/// Throws std::invalid_argument for unknown species or input == output.
MonotonicityVerdict classify_monotonicity(const ReactionNetwork& net, const std::string& input,
                                          const std::string& output);

/// Classification under a caller-supplied labeling, which must be consistent.
MonotonicityVerdict classify_with_labeling(const ReactionNetwork& net, const std::string& input,
                                           const std::string& output, const Labeling& sigma);

/// One step of a user-declared cascade. Empty `reactions` means the whole network.
struct ChainStep {
    std::vector<std::string> reactions;
    std::string input;
    std::string output;
};

struct ChainVerdict {
    MonotonicityKind kind = MonotonicityKind::Inconclusive;
    FailedCondition failed = FailedCondition::None;
    std::string reason;
    std::vector<MonotonicityVerdict> steps;
};

/// Classifies every step on its sub-network and multiplies the signs. Step k
/// feeds step k+1 when its output is the next input, or a modifier of the
/// reaction the next input is involved in.
ChainVerdict classify_chain(const ReactionNetwork& net, const std::vector<ChainStep>& steps);

/// Parses `[{"reactions": [...], "input": "A", "output": "B"}, ...]`.
std::vector<ChainStep> parse_chain(std::string_view json_text);
std::vector<ChainStep> load_chain(const std::string& path);

/// Two steady-state simulations at the ends of the input interval, other
/// initials as declared in the network. `kind` must be monotone.
AlphaReport endpoint_verification(const ReactionNetwork& net, const std::string& input, const Interval& input_interval,
                                  const std::string& output, double alpha, const SimOptions& sim,
                                  MonotonicityKind kind);

namespace serial {
AlphaReport endpoint_verification(const ReactionNetwork& net, const std::string& input, const Interval& input_interval,
                                  const std::string& output, double alpha, const SimOptions& sim,
                                  MonotonicityKind kind);
}

/// Graphviz rendering: E+ solid, E- dashed, nodes annotated with their sign.
std::string to_dot(const ReactionNetwork& net, const RGraph& g, const std::optional<Labeling>& sigma);

}  // namespace crnrobust
