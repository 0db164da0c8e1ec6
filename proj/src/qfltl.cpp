#include "crnrobust/qfltl.hpp"

#include <cmath>
#include <functional>

namespace crnrobust {

namespace {

Formula rebuild(const Formula& f, const std::function<Formula(const Atom&)>& on_atom) {
    using K = Formula::Kind;
    if (f.kind() == K::True) return f;
    if (f.kind() == K::Atom) return on_atom(f.atom());
    // Left operand first: callers rely on left-to-right atom order.
    Formula lhs = rebuild(f.lhs(), on_atom);
    switch (f.kind()) {
        case K::Not: return Formula::negation(std::move(lhs));
        case K::Next: return Formula::next(std::move(lhs));
        case K::Finally: return Formula::finally(std::move(lhs));
        case K::Globally: return Formula::globally(std::move(lhs));
        default: break;
    }
    Formula rhs = rebuild(f.rhs(), on_atom);
    switch (f.kind()) {
        case K::And: return Formula::conjunction(std::move(lhs), std::move(rhs));
        case K::Or: return Formula::disjunction(std::move(lhs), std::move(rhs));
        case K::Implies: return Formula::implication(std::move(lhs), std::move(rhs));
        case K::Until: return Formula::until(std::move(lhs), std::move(rhs));
        default: break;
    }
    throw std::logic_error("unhandled formula kind");
}

using Domains = std::vector<BoxSet>;

class DomainBuilder {
public:
    DomainBuilder(const Trace& trace, std::size_t q) : trace_(trace), q_(q), n_(trace.size()) {}

    Domains build(const Formula& f) {
        using K = Formula::Kind;
        switch (f.kind()) {
            case K::True: return Domains(n_, BoxSet::full(q_));
            case K::Atom: return atom(f.atom());
            case K::Not: {
                auto d = build(f.lhs());
                for (auto& s : d) s = s.complement();
                return d;
            }
            case K::And:
            case K::Or:
            case K::Implies: {
                auto a = build(f.lhs());
                const auto b = build(f.rhs());
                for (std::size_t i = 0; i < n_; ++i) {
                    if (f.kind() == K::And)
                        a[i] = a[i].intersect(b[i]);
                    else if (f.kind() == K::Or)
                        a[i] = a[i].unite(b[i]);
                    else
                        a[i] = a[i].complement().unite(b[i]);
                }
                return a;
            }
            case K::Next: {
                auto d = build(f.lhs());
                for (std::size_t i = 0; i + 1 < n_; ++i) d[i] = std::move(d[i + 1]);
                if (n_ > 1) d[n_ - 1] = d[n_ - 2];
                return d;
            }
            case K::Until: {
                const auto a = build(f.lhs());
                auto b = build(f.rhs());
                for (std::size_t i = n_ - 1; i-- > 0;) b[i] = b[i].unite(a[i].intersect(b[i + 1]));
                return b;
            }
            case K::Finally: {
                auto d = build(f.lhs());
                for (std::size_t i = n_ - 1; i-- > 0;) d[i] = d[i].unite(d[i + 1]);
                return d;
            }
            case K::Globally: {
                auto d = build(f.lhs());
                for (std::size_t i = n_ - 1; i-- > 0;) d[i] = d[i].intersect(d[i + 1]);
                return d;
            }
        }
        throw std::logic_error("unhandled formula kind");
    }

private:
    Domains atom(const Atom& a) {
        const auto col = trace_.observable(a.observable);
        if (!col) throw FormulaError(FormulaError::npos, "unknown observable '" + a.observable + "'");
        Domains d;
        d.reserve(n_);
        if (!a.is_free()) {
            const double c = std::get<double>(a.threshold);
            for (std::size_t i = 0; i < n_; ++i)
                d.push_back(compare(trace_.value(i, *col), a.op, c) ? BoxSet::full(q_) : BoxSet::empty_set(q_));
            return d;
        }
        const auto k = std::get<Variable>(a.threshold).index;
        if (k >= q_) throw FormulaError(FormulaError::npos, "variable index exceeds domain dimension");
        for (std::size_t i = 0; i < n_; ++i) {
            const double v = trace_.value(i, *col);
            if (std::isnan(v)) {
                d.push_back(BoxSet::empty_set(q_));
                continue;
            }
            // value op y, solved for y
            Range r;
            switch (a.op) {
                case Cmp::Greater: r = Range::below(v, false); break;
                case Cmp::GreaterEq: r = Range::below(v, true); break;
                case Cmp::Less: r = Range::above(v, false); break;
                case Cmp::LessEq: r = Range::above(v, true); break;
            }
            d.push_back(BoxSet::slab(q_, k, r));
        }
        return d;
    }

    const Trace& trace_;
    std::size_t q_;
    std::size_t n_;
};

}  // namespace

Formula QFLTLFormula::instantiate(std::span<const double> y) const {
    if (y.size() < arity()) throw std::invalid_argument("instantiation point has too few coordinates");
    return rebuild(formula, [&](const Atom& a) {
        if (!a.is_free()) return Formula::atom(a);
        return Formula::atom(a.observable, a.op, y[std::get<Variable>(a.threshold).index]);
    });
}

QFLTLFormula abstract_formula(const Formula& f) {
    if (!f.closed()) throw FormulaError(FormulaError::npos, "cannot abstract a formula with free variables");
    QFLTLFormula qf;
    // rebuild visits children left to right, which is syntactic occurrence order
    qf.formula = rebuild(f, [&](const Atom& a) {
        const std::size_t k = qf.reference_point.size();
        qf.reference_point.push_back(std::get<double>(a.threshold));
        return Formula::atom(a.observable, a.op, Variable{k});
    });
    return qf;
}

BoxSet satisfaction_domain(const Trace& trace, const Formula& f, std::size_t q) {
    if (trace.empty()) throw std::invalid_argument("satisfaction domain of an empty trace");
    if (f.arity() > q) throw std::invalid_argument("formula uses more variables than the domain dimension");
    return DomainBuilder(trace, q).build(f).front();
}

BoxSet satisfaction_domain(const Trace& trace, const QFLTLFormula& qf) {
    return satisfaction_domain(trace, qf.formula, qf.arity());
}

double violation_degree(const Trace& trace, const Formula& f) {
    const auto qf = abstract_formula(f);
    return satisfaction_domain(trace, qf).distance(qf.reference_point);
}

double satisfaction_degree_from_vd(double vd) noexcept { return std::isinf(vd) ? 0.0 : 1.0 / (1.0 + vd); }

double satisfaction_degree(const Trace& trace, const Formula& f) {
    return satisfaction_degree_from_vd(violation_degree(trace, f));
}

Assessment assess(const Trace& trace, const Formula& f) {
    Assessment a;
    a.holds = eval_ltl(trace, f);
    a.abstraction = abstract_formula(f);
    a.domain = satisfaction_domain(trace, a.abstraction);
    a.violation = a.domain.distance(a.abstraction.reference_point);
    a.satisfaction = satisfaction_degree_from_vd(a.violation);
    return a;
}

}  // namespace crnrobust
