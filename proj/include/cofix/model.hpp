#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cofix/predicate.hpp"

namespace cofix {

// Finite coalgebras for the three behavior signatures. State identity is the
// declared order in the source document; every predicate is index-aligned
// to it.

struct KripkeModel {
    std::vector<std::string> states;
    std::map<std::string, Predicate> props;  // prop name -> valuation subset
    std::vector<Predicate> succ;             // per state, successor subset
};

struct LabeledModel {
    std::vector<std::string> states;
    std::map<std::string, Predicate> props;
    std::vector<std::string> labels;
    // succ[labelIndex][state] = successor subset along that label
    std::vector<std::vector<Predicate>> succ;
};

// Per-state finitely supported subdistribution, stored sparse. Weight sum
// per state is at most 1 (mass deficit = failure probability).
struct ProbModel {
    std::vector<std::string> states;
    std::vector<std::string> payoutLabels;
    std::map<std::string, std::vector<double>> payout;  // label -> per-state payout
    std::vector<std::vector<std::pair<int, double>>> step;

    double mass(int state) const;
    // Dense row of the subdistribution matrix for one state.
    std::vector<double> stepRow(int state) const;
};

using Model = std::variant<KripkeModel, LabeledModel, ProbModel>;

enum class ModelKind { Kripke, Labeled, Prob };

ModelKind kindOf(const Model& m);
const std::vector<std::string>& statesOf(const Model& m);
int stateCount(const Model& m);
int stateIndex(const Model& m, const std::string& name);
LatticeContext latticeContextOf(const Model& m);

// Model valuation of a proposition / payout label; unknown names default to
// the empty set / zero vector.
Predicate atomPredicate(const Model& m, const std::string& name);

// A function on state indices between two models of the same signature.
struct StateMap {
    std::vector<int> map;  // source index -> target index

    int apply(int s) const { return map.at(static_cast<std::size_t>(s)); }
    // Preimage of a target-side set predicate.
    Predicate preimage(const Predicate& target, int sourceWidth) const;
};

StateMap identityMap(const Model& m);
StateMap parseStateMap(const Model& source, const Model& target, const std::string& json);

struct MorphismVerdict {
    bool ok = true;
    int state = -1;           // first violating source state
    std::string reason;       // "prop" | "step"
    std::string detail;
};

// Checks Bf . gamma1 = gamma2 . f concretely: props preserved pointwise,
// successor images per label, pushforward distributions and payouts.
// Probabilistic comparisons use absolute tolerance 1e-12.
MorphismVerdict checkMorphism(const Model& source, const Model& target, const StateMap& f);

struct QuotientOutcome {
    bool ok = false;
    std::optional<Model> quotient;
    StateMap projection;
    std::string violatingBlock;
    std::string reason;
};

// Quotients the model by a partition of its state set (blocks of indices).
// Succeeds iff the partition is a congruence for props and steps; then the
// projection passes checkMorphism.
QuotientOutcome quotientByKernel(const Model& m, const std::vector<std::vector<int>>& partition);

// JSON document interface (schema in the README). Throws UserError on schema
// violations, dangling state references, mass > 1, payouts outside [0,1].
Model loadModel(const std::string& jsonText);
Model loadModelFile(const std::string& path);
std::string serializeModel(const Model& m);

constexpr double kProbTolerance = 1e-12;

} // namespace cofix
