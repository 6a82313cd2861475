#pragma once

#include <unordered_map>

#include "cofix/fixpoint.hpp"
#include "cofix/formula.hpp"
#include "cofix/model.hpp"

namespace cofix {

constexpr int kDefaultClosureCap = 10000;
constexpr double kInvarianceTol = 1e-6;

// One unfolding step of a fixpoint modality into exit branch plus one-step
// guarded continuations:
//   dia* a        ->  a \/ dia(dia* a)
//   <alpha> a     ->  \/_i <pi_i>(<alpha_i> a)  (+ a iff g(alpha) has eps)
//   sigma[q] a    ->  q*a + (1-q)*dia(sigma[q] a)
//   sharp/flat    ->  scheme body with arguments and self substituted
GuardedTerm unfold(const Formula& fixFormula);

// The finite formula fragment a table-based evaluation runs on: closed under
// subformulas and under formula leaves of unfoldings of Fix-headed members,
// in deterministic discovery order, root first.
class Closure {
public:
    static Closure compute(const FormulaPtr& root, int cap = kDefaultClosureCap);

    const std::vector<FormulaPtr>& members() const { return members_; }
    const std::vector<std::string>& keys() const { return keys_; }
    const FormulaPtr& root() const { return root_; }
    const std::string& rootKey() const { return keys_.front(); }
    bool has(const std::string& key) const { return index_.count(key) > 0; }
    const GuardedTerm& unfoldingOf(const std::string& key) const;

private:
    FormulaPtr root_;
    std::vector<FormulaPtr> members_;
    std::vector<std::string> keys_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, GuardedTerm> unfoldings_;
};

// The composite P(gamma) . delta for the built-in liftings: dia/box on Kripke
// models, <label> diamonds on labeled models, expectation dia on probabilistic
// models. Atoms are read off the model directly by the evaluators.
Predicate interpretModal(const Model& model, const std::string& modality,
                         const std::vector<Predicate>& args);

struct EvalOptions {
    double tol = kDefaultTolerance;
    int maxIter = kDefaultMaxIterations;
    int closureCap = kDefaultClosureCap;
    // Evaluate greatest fixpoints in evalInitial through the dualized scheme
    // and complement instead of descending iteration.
    bool flatViaDual = false;
};

struct SemanticResult {
    Closure closure;
    Table table;
    int iterations = 0;
    double residual = 0.0;

    const Predicate& root() const { return table.at(closure.rootKey()); }
    const Predicate& at(const FormulaPtr& f) const;
};

// Least-solution semantics: one simultaneous Kleene iteration over the whole
// closure table. Negated and greatest-fixpoint members are stratified: they
// are evaluated by a recursive run (complement / dual rewrite) and held
// constant in the outer iteration.
SemanticResult evalLeast(const Model& model, const FormulaPtr& root,
                         const EvalOptions& opts = {});

// Initial-algebra semantics: a compositional bottom-up fold where each
// fixpoint node triggers its own inner fixpoint over the family of fixpoint
// formulas its unfoldings reach; negation is plain complement.
SemanticResult evalInitial(const Model& model, const FormulaPtr& root,
                           const EvalOptions& opts = {});

struct InvarianceVerdict {
    bool ok = true;
    std::string formulaKey;  // first violating closure member
    int state = -1;          // first violating source state
    double discrepancy = 0.0;
};

// For a coalgebra morphism f, checks semantic invariance over every closure
// member: source semantics = f-preimage of target semantics (set case, exact)
// or source = target . f (quantitative, within 1e-6).
InvarianceVerdict checkInvariance(const Model& source, const Model& target, const StateMap& f,
                                  const FormulaPtr& root, const EvalOptions& opts = {});

} // namespace cofix
