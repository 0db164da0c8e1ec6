#include <algorithm>
#include <charconv>
#include <cmath>

#include "crnrobust/ltl.hpp"

namespace crnrobust {

struct Formula::Node {
    Kind kind;
    crnrobust::Atom atom;
    std::vector<Formula> children;
};

std::string_view to_string(Cmp c) {
    switch (c) {
        case Cmp::Less: return "<";
        case Cmp::LessEq: return "<=";
        case Cmp::Greater: return ">";
        case Cmp::GreaterEq: return ">=";
    }
    return "?";
}

bool compare(double lhs, Cmp op, double rhs) noexcept {
    switch (op) {
        case Cmp::Less: return lhs < rhs;
        case Cmp::LessEq: return lhs <= rhs;
        case Cmp::Greater: return lhs > rhs;
        case Cmp::GreaterEq: return lhs >= rhs;
    }
    return false;
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Formula::Formula() : node_(std::make_shared<const Node>(Node{Kind::True, {}, {}})) {}

Formula Formula::truth() { return Formula(std::make_shared<const Node>(Node{Kind::True, {}, {}})); }

Formula Formula::atom(crnrobust::Atom a) {
    return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}}));
}

Formula Formula::atom(std::string observable, Cmp op, double constant) {
    return atom(crnrobust::Atom{std::move(observable), op, constant});
}

Formula Formula::atom(std::string observable, Cmp op, Variable var) {
    return atom(crnrobust::Atom{std::move(observable), op, var});
}

namespace {
template <class... F>
std::vector<Formula> kids(F... f) {
    return {std::move(f)...};
}
}  // namespace

Formula Formula::negation(Formula f) { return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, kids(f)})); }
Formula Formula::conjunction(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::And, {}, kids(a, b)}));
}
Formula Formula::disjunction(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, kids(a, b)}));
}
Formula Formula::implication(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Implies, {}, kids(a, b)}));
}
Formula Formula::next(Formula f) { return Formula(std::make_shared<const Node>(Node{Kind::Next, {}, kids(f)})); }
Formula Formula::until(Formula a, Formula b) {
    return Formula(std::make_shared<const Node>(Node{Kind::Until, {}, kids(a, b)}));
}
Formula Formula::finally(Formula f) { return Formula(std::make_shared<const Node>(Node{Kind::Finally, {}, kids(f)})); }
Formula Formula::globally(Formula f) {
    return Formula(std::make_shared<const Node>(Node{Kind::Globally, {}, kids(f)}));
}

Formula::Kind Formula::kind() const noexcept { return node_->kind; }

const crnrobust::Atom& Formula::atom() const {
    if (node_->kind != Kind::Atom) throw std::logic_error("formula node is not an atom");
    return node_->atom;
}

const Formula& Formula::lhs() const {
    if (node_->children.empty()) throw std::logic_error("formula node has no operand");
    return node_->children[0];
}

const Formula& Formula::rhs() const {
    if (node_->children.size() < 2) throw std::logic_error("formula node has no right operand");
    return node_->children[1];
}

bool Formula::is_unary() const noexcept { return node_->children.size() == 1; }
bool Formula::is_binary() const noexcept { return node_->children.size() == 2; }

bool Formula::closed() const { return arity() == 0; }

std::size_t Formula::arity() const {
    if (node_->kind == Kind::Atom)
        return node_->atom.is_free() ? std::get<Variable>(node_->atom.threshold).index + 1 : 0;
    std::size_t a = 0;
    for (const auto& c : node_->children) a = std::max(a, c.arity());
    return a;
}

std::size_t Formula::depth() const {
    std::size_t d = 0;
    for (const auto& c : node_->children) d = std::max(d, c.depth());
    return d + 1;
}

namespace {

int precedence(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Implies: return 1;
        case Formula::Kind::Or: return 2;
        case Formula::Kind::And: return 3;
        case Formula::Kind::Until: return 4;
        case Formula::Kind::True:
        case Formula::Kind::Atom: return 6;
        default: return 5;
    }
}

bool right_assoc(Formula::Kind k) { return k == Formula::Kind::Until || k == Formula::Kind::Implies; }

std::string_view binary_symbol(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::And: return " & ";
        case Formula::Kind::Or: return " | ";
        case Formula::Kind::Implies: return " -> ";
        case Formula::Kind::Until: return " U ";
        default: return " ? ";
    }
}

void print(const Formula& f, std::string& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::True: out += "true"; return;
        case K::Atom: {
            const auto& a = f.atom();
            out += '[';
            out += a.observable;
            out += "] ";
            out += to_string(a.op);
            out += ' ';
            if (a.is_free())
                out += "y" + std::to_string(std::get<Variable>(a.threshold).index + 1);
            else
                out += format_number(std::get<double>(a.threshold));
            return;
        }
        case K::Not: {
            out += '!';
            const bool paren = f.lhs().kind() != K::True && f.lhs().kind() != K::Not;
            if (paren) out += '(';
            print(f.lhs(), out);
            if (paren) out += ')';
            return;
        }
        case K::Next:
        case K::Finally:
        case K::Globally:
            out += f.kind() == K::Next ? "X(" : f.kind() == K::Finally ? "F(" : "G(";
            print(f.lhs(), out);
            out += ')';
            return;
        default: break;
    }
    const int p = precedence(f.kind());
    const bool ra = right_assoc(f.kind());
    const int pl = precedence(f.lhs().kind());
    const int pr = precedence(f.rhs().kind());
    const bool paren_l = ra ? pl <= p : pl < p;
    const bool paren_r = ra ? pr < p : pr <= p;
    if (paren_l) out += '(';
    print(f.lhs(), out);
    if (paren_l) out += ')';
    out += binary_symbol(f.kind());
    if (paren_r) out += '(';
    print(f.rhs(), out);
    if (paren_r) out += ')';
}

}  // namespace

std::string Formula::to_string() const {
    std::string s;
    print(*this, s);
    return s;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->kind != b.node_->kind) return false;
    if (a.node_->kind == Formula::Kind::Atom) return a.node_->atom == b.node_->atom;
    if (a.node_->children.size() != b.node_->children.size()) return false;
    for (std::size_t i = 0; i < a.node_->children.size(); ++i)
        if (!(a.node_->children[i] == b.node_->children[i])) return false;
    return true;
}

}  // namespace crnrobust
