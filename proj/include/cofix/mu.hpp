#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cofix/errors.hpp"

namespace cofix {

struct MuFormula;
using MuPtr = std::shared_ptr<const MuFormula>;

// Plain mu-calculus formulas over dia/box, used as translateMu input and by
// the independent mu oracle. Variables are the capitalized identifiers bound
// by "mu X." / "nu X.".
struct MuFormula {
    enum class Kind { Top, Bot, Atom, Var, And, Or, Neg, Modal, Mu, Nu };
    Kind kind = Kind::Top;
    std::string name;              // Atom / Var / bound variable of Mu,Nu
    std::string modality;          // Modal
    std::vector<MuPtr> children;

    static MuPtr top();
    static MuPtr bot();
    static MuPtr atom(std::string name);
    static MuPtr var(std::string name);
    static MuPtr mkAnd(std::vector<MuPtr> cs);
    static MuPtr mkOr(std::vector<MuPtr> cs);
    static MuPtr neg(MuPtr c);
    static MuPtr modal(std::string m, MuPtr c);
    static MuPtr mu(std::string v, MuPtr body);
    static MuPtr nu(std::string v, MuPtr body);
};

// Free variables of the formula, in first-occurrence order.
std::vector<std::string> freeVars(const MuPtr& f);

std::string printMuFormula(const MuPtr& f);

} // namespace cofix
