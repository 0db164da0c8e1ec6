#include "crnrobust/ltl.hpp"

namespace crnrobust {

namespace {

using Truth = std::vector<char>;

std::size_t resolve(const Trace& trace, const Atom& a) {
    if (auto col = trace.observable(a.observable)) return *col;
    throw FormulaError(FormulaError::npos, "unknown observable '" + a.observable + "'");
}

// Backward recurrences over indices; index n-1 stutters forever, so every
// temporal operator at the last index reduces to its operand there.
Truth eval(const Trace& trace, const Formula& f) {
    using K = Formula::Kind;
    const std::size_t n = trace.size();
    switch (f.kind()) {
        case K::True: return Truth(n, 1);
        case K::Atom: {
            const auto& a = f.atom();
            if (a.is_free())
                throw FormulaError(FormulaError::npos, "formula has free variable in atom on '" + a.observable + "'");
            const auto col = resolve(trace, a);
            const double c = std::get<double>(a.threshold);
            Truth out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = compare(trace.value(i, col), a.op, c);
            return out;
        }
        case K::Not: {
            auto v = eval(trace, f.lhs());
            for (auto& b : v) b = !b;
            return v;
        }
        case K::And:
        case K::Or:
        case K::Implies: {
            auto a = eval(trace, f.lhs());
            const auto b = eval(trace, f.rhs());
            for (std::size_t i = 0; i < n; ++i) {
                if (f.kind() == K::And)
                    a[i] = a[i] && b[i];
                else if (f.kind() == K::Or)
                    a[i] = a[i] || b[i];
                else
                    a[i] = !a[i] || b[i];
            }
            return a;
        }
        case K::Next: {
            const auto v = eval(trace, f.lhs());
            Truth out(n);
            for (std::size_t i = 0; i < n; ++i) out[i] = v[i + 1 < n ? i + 1 : i];
            return out;
        }
        case K::Until: {
            const auto a = eval(trace, f.lhs());
            auto b = eval(trace, f.rhs());
            for (std::size_t i = n - 1; i-- > 0;) b[i] = b[i] || (a[i] && b[i + 1]);
            return b;
        }
        case K::Finally: {
            auto v = eval(trace, f.lhs());
            for (std::size_t i = n - 1; i-- > 0;) v[i] = v[i] || v[i + 1];
            return v;
        }
        case K::Globally: {
            auto v = eval(trace, f.lhs());
            for (std::size_t i = n - 1; i-- > 0;) v[i] = v[i] && v[i + 1];
            return v;
        }
    }
    throw std::logic_error("unhandled formula kind");
}

}  // namespace

std::vector<bool> eval_ltl_all(const Trace& trace, const Formula& f) {
    if (trace.empty()) throw std::invalid_argument("cannot evaluate a formula on an empty trace");
    const auto v = eval(trace, f);
    return std::vector<bool>(v.begin(), v.end());
}

bool eval_ltl(const Trace& trace, const Formula& f) { return eval_ltl_all(trace, f).front(); }

}  // namespace crnrobust
