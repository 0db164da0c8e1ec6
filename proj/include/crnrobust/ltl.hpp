#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crnrobust/odesim.hpp"

namespace crnrobust {

/// Parse or binding error. `position()` is a 0-based character offset into the
/// formula text, or npos for errors not tied to a location.
class FormulaError : public std::runtime_error {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    FormulaError(std::size_t pos, const std::string& what)
        : std::runtime_error(pos == npos ? what : what + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

enum class Cmp { Less, LessEq, Greater, GreaterEq };

std::string_view to_string(Cmp c);
bool compare(double lhs, Cmp op, double rhs) noexcept;

/// Free threshold variable y_{index+1}.
struct Variable {
    std::size_t index = 0;
    friend bool operator==(const Variable&, const Variable&) = default;
};

using Threshold = std::variant<double, Variable>;

/// `[observable] op threshold`; observable is a species name or `d<species>`.
struct Atom {
    std::string observable;
    Cmp op = Cmp::Greater;
    Threshold threshold = 0.0;

    bool is_free() const noexcept { return std::holds_alternative<Variable>(threshold); }
    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Immutable LTL syntax tree with structural sharing.
class Formula {
public:
    enum class Kind { True, Atom, Not, And, Or, Implies, Next, Until, Finally, Globally };

    /// The constant `true`.
    Formula();

    static Formula truth();
    static Formula atom(Atom a);
    static Formula atom(std::string observable, Cmp op, double constant);
    static Formula atom(std::string observable, Cmp op, Variable var);
    static Formula negation(Formula f);
    static Formula conjunction(Formula a, Formula b);
    static Formula disjunction(Formula a, Formula b);
    static Formula implication(Formula a, Formula b);
    static Formula next(Formula f);
    static Formula until(Formula a, Formula b);
    static Formula finally(Formula f);
    static Formula globally(Formula f);

    Kind kind() const noexcept;
    const crnrobust::Atom& atom() const;
    /// Operand of a unary node, or the left operand of a binary node.
    const Formula& lhs() const;
    const Formula& rhs() const;
    bool is_unary() const noexcept;
    bool is_binary() const noexcept;

    /// True when no atom carries a free variable.
    bool closed() const;
    /// 1 + the largest variable index used, 0 when closed.
    std::size_t arity() const;
    std::size_t depth() const;

    /// Concrete syntax accepted by parse_formula.
    std::string to_string() const;

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Concrete syntax: `F(..)`, `G(..)`, `X(..)`, infix `U`, `&`, `|`, `->`,
/// prefix `!`, constants `true`/`false`, atoms `[Name] >= 7` or `[Name] < y1`.
/// Precedence: unary > U > & > | > ->; `U` and `->` associate to the right.
Formula parse_formula(std::string_view text);

/// Satisfaction at index 0 with terminal stuttering (the last state repeats
/// forever). Throws FormulaError for open formulas or unknown observables.
bool eval_ltl(const Trace& trace, const Formula& f);

/// Satisfaction at every index of the trace.
std::vector<bool> eval_ltl_all(const Trace& trace, const Formula& f);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

}  // namespace crnrobust
