#pragma once

#include <vector>

#include "crnrobust/boxset.hpp"
#include "crnrobust/ltl.hpp"

namespace crnrobust {

/// Formula whose numeric constants were replaced by y1..yq in left-to-right
/// occurrence order; reference_point holds the replaced constants.
struct QFLTLFormula {
    Formula formula;
    std::vector<double> reference_point;

    std::size_t arity() const noexcept { return reference_point.size(); }
    /// Formula with every variable y_k replaced by y[k].
    Formula instantiate(std::span<const double> y) const;
};

/// Pre: f is closed (throws FormulaError otherwise).
QFLTLFormula abstract_formula(const Formula& f);

/// {y in R^q | trace |= qf(y)} under terminal stuttering. Strict atoms give
/// open bounds.
BoxSet satisfaction_domain(const Trace& trace, const QFLTLFormula& qf);
/// Same for a formula written with free variables directly; q = f.arity().
BoxSet satisfaction_domain(const Trace& trace, const Formula& f, std::size_t q);

/// Euclidean distance from the reference point to the satisfaction domain of
/// the abstracted formula; +inf when the domain is empty.
double violation_degree(const Trace& trace, const Formula& f);

/// 1 / (1 + vd); 0 when vd is infinite.
double satisfaction_degree(const Trace& trace, const Formula& f);
double satisfaction_degree_from_vd(double vd) noexcept;

struct Assessment {
    bool holds = false;
    double violation = 0.0;
    double satisfaction = 0.0;
    QFLTLFormula abstraction;
    BoxSet domain;
};

/// eval_ltl, abstraction, domain, vd and sd in one pass.
Assessment assess(const Trace& trace, const Formula& f);

}  // namespace crnrobust
