#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cofix/program.hpp"

namespace cofix {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;
struct FixpointScheme;
using SchemePtr = std::shared_ptr<const FixpointScheme>;

enum class FormulaKind { Top, Bot, Atom, And, Or, Neg, Convex, Modal, Fix };

enum class FixKind { DiamondStar, ProgramDiamond, SigmaQ, Sharp, Flat };

struct FixHead {
    FixKind kind = FixKind::DiamondStar;
    std::optional<Program> program;  // ProgramDiamond
    double q = 0.0;                  // SigmaQ
    SchemePtr scheme;                // Sharp / Flat
};

// One polymorphic formula tree for all four logic instances; per-instance
// legality is checked by validate(). And/Or are n-ary (chains are flattened
// by the parser), Neg is unary, Convex pairs coefficients with children.
struct Formula {
    FormulaKind kind = FormulaKind::Top;
    std::string atom;                  // Atom
    std::string modality;              // Modal: "dia" | "box" | atomic program
    std::vector<FormulaPtr> children;  // And/Or/Neg/Convex/Modal/Fix arguments
    std::vector<double> coeffs;        // Convex, aligned with children
    std::optional<FixHead> fix;        // Fix
};

FormulaPtr fTop();
FormulaPtr fBot();
FormulaPtr fAtom(std::string name);
FormulaPtr fAnd(std::vector<FormulaPtr> children);
FormulaPtr fOr(std::vector<FormulaPtr> children);
FormulaPtr fNeg(FormulaPtr child);
FormulaPtr fConvex(std::vector<double> coeffs, std::vector<FormulaPtr> children);
FormulaPtr fModal(std::string modality, FormulaPtr child);
FormulaPtr fDiamondStar(FormulaPtr child);
FormulaPtr fProgramDiamond(Program program, FormulaPtr child);
FormulaPtr fSigmaQ(double q, FormulaPtr child);
FormulaPtr fSharp(SchemePtr scheme, std::vector<FormulaPtr> args);
FormulaPtr fFlat(SchemePtr scheme, std::vector<FormulaPtr> args);

bool equal(const Formula& a, const Formula& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Scheme bodies: the section-5 grammar over parametric variables, the
// fixpoint variable, closed formula leaves, lattice connectives, one-step
// modalities and nested applications. There is deliberately no negation
// node; negation lives only inside closed Leaf formulas.
enum class SchemeTermKind { Var, FixVar, Leaf, Top, Bot, And, Or, Modal, Apply };

struct SchemeTerm {
    SchemeTermKind kind = SchemeTermKind::Top;
    std::string var;                  // Var
    FormulaPtr leaf;                  // Leaf
    std::string modality;             // Modal
    std::vector<SchemeTerm> children; // And/Or/Modal children, Apply arguments
    SchemePtr scheme;                 // Apply
    bool applyFlat = false;           // Apply binds a greatest fixpoint
};

struct FixpointScheme {
    std::vector<std::string> params;  // parametric variables, in order
    SchemeTerm body;
};

bool equal(const SchemeTerm& a, const SchemeTerm& b);
bool equal(const FixpointScheme& a, const FixpointScheme& b);

// The unfolded shape of a fixpoint modality: a propositional combination of
// closed formula leaves and one-step modalities. Fix-headed leaves sit below
// at least one modality except on the exit branch.
struct GuardedTerm {
    enum class Kind { Leaf, Top, Bot, And, Or, Convex, Modal };
    Kind kind = Kind::Top;
    FormulaPtr leaf;
    std::string modality;
    std::vector<GuardedTerm> children;
    std::vector<double> coeffs;

    static GuardedTerm mkLeaf(FormulaPtr f);
    static GuardedTerm mkTop() { return {}; }
    static GuardedTerm mkBot();
    static GuardedTerm mkAnd(std::vector<GuardedTerm> cs);
    static GuardedTerm mkOr(std::vector<GuardedTerm> cs);
    static GuardedTerm mkConvex(std::vector<double> coeffs, std::vector<GuardedTerm> cs);
    static GuardedTerm mkModal(std::string modality, std::vector<GuardedTerm> cs);
};

// All formula leaves of a guarded term, left to right.
void collectLeaves(const GuardedTerm& t, std::vector<FormulaPtr>& out);

enum class LogicId { DiamondStar, Pdl, Quant, Cfl };

std::string logicIdName(LogicId id);
LogicId parseLogicId(const std::string& name);

struct ModalitySig {
    int arity = 1;
    std::string dual;  // empty when none declared
};

struct LogicInstance {
    LogicId id = LogicId::DiamondStar;
    std::map<std::string, ModalitySig> modalities;
    std::vector<std::string> programAlphabet;  // pdl only

    static LogicInstance diamondStar();
    static LogicInstance pdl(std::vector<std::string> alphabet);
    static LogicInstance quant();
    static LogicInstance cfl();

    bool hasModality(const std::string& name) const { return modalities.count(name) > 0; }
    std::string dualOf(const std::string& name) const;
};

struct Diagnostic {
    std::vector<int> path;  // child indices from the root
    std::string message;
};

// Per-instance well-formedness: node legality, coefficient ranges, program
// alphabets, scheme closure/arity, guardedness and fixpoint polarity.
// Empty result iff the formula is valid.
std::vector<Diagnostic> validate(const FormulaPtr& formula, const LogicInstance& instance);

} // namespace cofix
