#pragma once

#include "cofix/formula.hpp"
#include "cofix/mu.hpp"

namespace cofix {

struct GuardedCheck {
    bool ok = true;
    std::vector<int> path;  // child indices to the first offender
    std::string reason;
};

// Every occurrence of the fixpoint variable and every nested application must
// sit beneath at least one one-step modality; parametric variables and closed
// formula leaves may appear anywhere. Nested schemes are checked against
// their own fixpoint variable.
GuardedCheck checkGuarded(const FixpointScheme& scheme);

// gamma(args/vars, self/x): parametric variables replaced by the argument
// formulas, the fixpoint variable by `self`, nested applications closed off
// into Fix-headed formula leaves. Requires a guarded scheme and a full
// argument list.
GuardedTerm substitute(const FixpointScheme& scheme, const std::vector<FormulaPtr>& args,
                       const FormulaPtr& self);

// De Morgan dual: swaps and/or and top/bottom, replaces each modality by its
// declared dual, negates closed formula leaves (unwrapping double negations),
// flips nested application polarity and dualizes their schemes; parametric
// and fixpoint variables stay fixed.
FixpointScheme dualize(const FixpointScheme& scheme, const LogicInstance& instance);

// Rewrites a flat application bot_gamma(args) as ~ sharp_{gamma-dual}(~args).
FormulaPtr dualRewrite(const Formula& flatFormula, const LogicInstance& instance);

// Translates a closed, guarded, alternation-free mu-calculus formula into the
// cfl instance, one scheme per binder, hoisting unguarded inner binders by a
// single unfolding. nu binders map to greatest-fixpoint applications.
FormulaPtr translateMu(const MuPtr& formula, const LogicInstance& instance);

} // namespace cofix
