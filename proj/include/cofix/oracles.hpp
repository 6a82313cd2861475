#pragma once

#include <map>

#include "cofix/formula.hpp"
#include "cofix/model.hpp"
#include "cofix/mu.hpp"

namespace cofix {

// Independent brute-force reference semantics. Everything here is written
// naively on purpose (explicit loops, dense matrices, Gaussian elimination)
// and shares no evaluation code with the semantics module.

// Square boolean matrix over a model's states.
struct Relation {
    int n = 0;
    std::vector<std::vector<char>> at;

    explicit Relation(int n) : n(n), at(n, std::vector<char>(n, 0)) {}
    bool get(int x, int y) const { return at[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] != 0; }
    void set(int x, int y, bool b = true) { at[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = b ? 1 : 0; }
};

// States with a (possibly empty) forward path into target, by breadth-first
// search on reversed edges.
Predicate reachOracle(const KripkeModel& model, const Predicate& target);

// The usual relational denotation of a test-free program: atomic = labeled
// edges, eps = identity, union, composition, reflexive-transitive closure.
Relation pdlRelation(const LabeledModel& model, const Program& program);

// {x | exists y with x R y and y in arg}.
Predicate relationApply(const Relation& r, const Predicate& arg);

// Knaster-Tarski semantics of plain mu-calculus formulas on a Kripke model,
// nested fixpoints recomputed naively. `valuation` binds free variables.
Predicate muOracle(const KripkeModel& model, const MuPtr& formula,
                   const std::map<std::string, Predicate>& valuation = {});

// Direct transcription of the mutual-recursion semantics of cfl formulas and
// schemes, mu/nu via ascending/descending iteration.
Predicate cflOracle(const KripkeModel& model, const FormulaPtr& root);

// Least fixpoint of v = q*a + (1-q)*M v, solved exactly as the linear system
// (I - (1-q)M)v = q*a by Gaussian elimination; q = 0 (or a singular system)
// falls back to iteration.
Predicate sigmaLinearOracle(const ProbModel& model, double q, const std::string& payoutAtom);

// Least fixpoint of v = max(a, M v), by policy iteration: stop/continue per
// state, exact linear solve per policy, improve until stable.
Predicate optStopOracle(const ProbModel& model, const std::string& payoutAtom);

// Whole-formula reference semantics for the diamondstar instance: structural
// recursion with dia* evaluated through the reachability oracle.
Predicate diamondStarOracle(const KripkeModel& model, const FormulaPtr& root);

// Whole-formula reference semantics for pdl: <alpha> through the relational
// denotation.
Predicate pdlOracle(const LabeledModel& model, const FormulaPtr& root);

} // namespace cofix
