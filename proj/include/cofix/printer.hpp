#pragma once

#include <string>

#include "cofix/formula.hpp"

namespace cofix {

// Surface-syntax printers with minimal parentheses; parseFormula(printFormula(f))
// is structurally equal to f. Numbers print in shortest round-trip form.
std::string printFormula(const FormulaPtr& f);
std::string printFormula(const Formula& f);
std::string printProgram(const Program& p);
std::string printScheme(const FixpointScheme& scheme, bool flat);
std::string printNormalForm(const NormalForm& nf);
std::string printGuardedTerm(const GuardedTerm& t);
std::string printNumber(double x);

// Canonical table/closure key of a formula (the printed form).
std::string formulaKey(const FormulaPtr& f);

} // namespace cofix
