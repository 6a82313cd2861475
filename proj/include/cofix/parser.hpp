#pragma once

#include <string>
#include <vector>

#include "cofix/formula.hpp"
#include "cofix/mu.hpp"

namespace cofix {

// Recursive-descent parsers over a shared lexer. All throw UserError with a
// character position on bad input. parseFormula additionally runs validate()
// and rejects formulas with diagnostics.
FormulaPtr parseFormula(const std::string& text, const LogicInstance& instance);

// Programs in the surface syntax ident | eps | a+b | a;b | a*; output is
// canonical. With an alphabet, unknown atomic programs are rejected.
Program parseProgram(const std::string& text);
Program parseProgram(const std::string& text, const std::vector<std::string>& alphabet);

// "mu X. ..." / "nu X. ..." with capitalized variables.
MuPtr parseMuFormula(const std::string& text);

} // namespace cofix
