#pragma once

#include <random>

#include "cofix/formula.hpp"
#include "cofix/model.hpp"

namespace cofix {

// Seeded generators for the property tests, the acceptance suite and the
// CLI's --seed option. Determinism contract: same seed, same output.
using Rng = std::mt19937_64;

KripkeModel randomKripke(Rng& rng, int maxStates = 8, int numProps = 3);
LabeledModel randomLabeled(Rng& rng, int maxStates = 8, int numLabels = 3, int numProps = 3);
ProbModel randomProb(Rng& rng, int maxStates = 10, int numPayouts = 2);
Model randomModel(Rng& rng, ModelKind kind);

Program randomProgram(Rng& rng, int maxOperators = 8, int numAtomics = 3);

struct FormulaGenOptions {
    int maxDepth = 4;
    int maxFixNodes = 4;
    bool allowNeg = true;
    bool allowFlat = true;  // cfl only
};

FormulaPtr randomFormula(Rng& rng, const LogicInstance& instance,
                         const FormulaGenOptions& opts = {});

// A guarded scheme body over `numParams` parametric variables, every fixpoint
// variable and nested application under at least one modality.
SchemePtr randomGuardedScheme(Rng& rng, int numParams, int maxDepth = 3);

// A model together with a congruent partition of its states, built by blowing
// up a random quotient; quotientByKernel always succeeds on the result.
struct CongruentPair {
    Model model;
    std::vector<std::vector<int>> partition;
};

CongruentPair randomCongruentPair(Rng& rng, ModelKind kind);

} // namespace cofix
