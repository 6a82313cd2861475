#include "cofix/printer.hpp"

#include <charconv>
#include <functional>
#include <sstream>

namespace cofix {

namespace {

// Precedence levels: convex sum 0, \/ 1, /\ 2, prefix operators 3, atoms 4.
constexpr int kSumPrec = 0;
constexpr int kOrPrec = 1;
constexpr int kAndPrec = 2;
constexpr int kUnaryPrec = 3;
constexpr int kAtomPrec = 4;

void printProgramAt(std::ostringstream& os, const Program& p, int parent);
void printFormulaAt(std::ostringstream& os, const Formula& f, int parent);
void printSchemeTermAt(std::ostringstream& os, const SchemeTerm& t, int parent);
void printApplication(std::ostringstream& os, const FixpointScheme& scheme, bool flat);

void wrapped(std::ostringstream& os, int mine, int parent, const std::function<void()>& body) {
    bool parens = mine < parent;
    if (parens) os << '(';
    body();
    if (parens) os << ')';
}

void printProgramAt(std::ostringstream& os, const Program& p, int parent) {
    switch (p.kind()) {
    case Program::Kind::Atomic: os << p.atom(); return;
    case Program::Kind::Eps: os << "eps"; return;
    case Program::Kind::Empty: os << '0'; return;  // internal form only
    case Program::Kind::Union:
        wrapped(os, 1, parent, [&] {
            for (std::size_t i = 0; i < p.children().size(); ++i) {
                if (i) os << '+';
                printProgramAt(os, p.children()[i], 2);
            }
        });
        return;
    case Program::Kind::Seq:
        wrapped(os, 2, parent, [&] {
            for (std::size_t i = 0; i < p.children().size(); ++i) {
                if (i) os << ';';
                printProgramAt(os, p.children()[i], 3);
            }
        });
        return;
    case Program::Kind::Star:
        printProgramAt(os, p.children().front(), 4);
        os << '*';
        return;
    }
}

void printFixHead(std::ostringstream& os, const Formula& f) {
    const FixHead& head = *f.fix;
    switch (head.kind) {
    case FixKind::DiamondStar:
        os << "dia* ";
        printFormulaAt(os, *f.children.front(), kUnaryPrec);
        return;
    case FixKind::ProgramDiamond:
        os << '<';
        printProgramAt(os, *head.program, 0);
        os << '>';
        printFormulaAt(os, *f.children.front(), kUnaryPrec);
        return;
    case FixKind::SigmaQ:
        os << "sigma[" << printNumber(head.q) << "] ";
        printFormulaAt(os, *f.children.front(), kUnaryPrec);
        return;
    case FixKind::Sharp:
    case FixKind::Flat: {
        printApplication(os, *head.scheme, head.kind == FixKind::Flat);
        os << '(';
        for (std::size_t i = 0; i < f.children.size(); ++i) {
            if (i) os << ", ";
            printFormulaAt(os, *f.children[i], 0);
            os << '/' << head.scheme->params[i];
        }
        os << ')';
        return;
    }
    }
}

void printFormulaAt(std::ostringstream& os, const Formula& f, int parent) {
    switch (f.kind) {
    case FormulaKind::Top: os << 'T'; return;
    case FormulaKind::Bot: os << 'F'; return;
    case FormulaKind::Atom: os << f.atom; return;
    case FormulaKind::And:
        wrapped(os, kAndPrec, parent, [&] {
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) os << " /\\ ";
                printFormulaAt(os, *f.children[i], kAndPrec + 1);
            }
        });
        return;
    case FormulaKind::Or:
        wrapped(os, kOrPrec, parent, [&] {
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) os << " \\/ ";
                printFormulaAt(os, *f.children[i], kOrPrec + 1);
            }
        });
        return;
    case FormulaKind::Neg:
        wrapped(os, kUnaryPrec, parent, [&] {
            os << '~';
            printFormulaAt(os, *f.children.front(), kUnaryPrec);
        });
        return;
    case FormulaKind::Convex:
        wrapped(os, kSumPrec, parent, [&] {
            for (std::size_t i = 0; i < f.children.size(); ++i) {
                if (i) os << " + ";
                os << printNumber(f.coeffs[i]) << '*';
                printFormulaAt(os, *f.children[i], kUnaryPrec + 1);
            }
        });
        return;
    case FormulaKind::Modal:
        wrapped(os, kUnaryPrec, parent, [&] {
            if (f.modality == "dia" || f.modality == "box")
                os << f.modality << ' ';
            else
                os << '<' << f.modality << '>';
            printFormulaAt(os, *f.children.front(), kUnaryPrec);
        });
        return;
    case FormulaKind::Fix:
        if (f.fix->kind == FixKind::Sharp || f.fix->kind == FixKind::Flat) {
            // Applications are self-delimiting.
            printFixHead(os, f);
        } else {
            wrapped(os, kUnaryPrec, parent, [&] { printFixHead(os, f); });
        }
        return;
    }
}

void printApplication(std::ostringstream& os, const FixpointScheme& scheme, bool flat) {
    os << (flat ? "gfp{" : "lfp{");
    printSchemeTermAt(os, scheme.body, 0);
    os << '}';
}

void printSchemeTermAt(std::ostringstream& os, const SchemeTerm& t, int parent) {
    switch (t.kind) {
    case SchemeTermKind::Var: os << t.var; return;
    case SchemeTermKind::FixVar: os << 'X'; return;
    case SchemeTermKind::Leaf: printFormulaAt(os, *t.leaf, parent); return;
    case SchemeTermKind::Top: os << 'T'; return;
    case SchemeTermKind::Bot: os << 'F'; return;
    case SchemeTermKind::And:
        wrapped(os, kAndPrec, parent, [&] {
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                if (i) os << " /\\ ";
                printSchemeTermAt(os, t.children[i], kAndPrec + 1);
            }
        });
        return;
    case SchemeTermKind::Or:
        wrapped(os, kOrPrec, parent, [&] {
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                if (i) os << " \\/ ";
                printSchemeTermAt(os, t.children[i], kOrPrec + 1);
            }
        });
        return;
    case SchemeTermKind::Modal:
        wrapped(os, kUnaryPrec, parent, [&] {
            if (t.modality == "dia" || t.modality == "box")
                os << t.modality << ' ';
            else
                os << '<' << t.modality << '>';
            printSchemeTermAt(os, t.children.front(), kUnaryPrec);
        });
        return;
    case SchemeTermKind::Apply:
        printApplication(os, *t.scheme, t.applyFlat);
        os << '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i) os << ", ";
            printSchemeTermAt(os, t.children[i], 0);
            os << '/' << t.scheme->params[i];
        }
        os << ')';
        return;
    }
}

} // namespace

std::string printNumber(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string printFormula(const Formula& f) {
    std::ostringstream os;
    printFormulaAt(os, f, 0);
    return os.str();
}

std::string printFormula(const FormulaPtr& f) {
    if (!f) throw InternalError("printFormula on null formula");
    return printFormula(*f);
}

std::string printProgram(const Program& p) {
    std::ostringstream os;
    printProgramAt(os, p, 0);
    return os.str();
}

std::string printScheme(const FixpointScheme& scheme, bool flat) {
    std::ostringstream os;
    printApplication(os, scheme, flat);
    return os.str();
}

std::string printNormalForm(const NormalForm& nf) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [atom, tail] : nf.summands) {
        if (!first) os << " + ";
        first = false;
        // Keep the pi;tail grouping visible: the tail prints as one unit.
        os << atom;
        if (tail.kind() != Program::Kind::Eps) {
            os << ';';
            printProgramAt(os, tail, 3);
        }
    }
    if (nf.epsFlag) {
        if (!first) os << " + ";
        os << "eps";
        first = false;
    }
    if (first) os << '0';
    return os.str();
}

std::string printGuardedTerm(const GuardedTerm& t) {
    using K = GuardedTerm::Kind;
    std::ostringstream os;
    switch (t.kind) {
    case K::Leaf: os << printFormula(t.leaf); break;
    case K::Top: os << 'T'; break;
    case K::Bot: os << 'F'; break;
    case K::And:
    case K::Or: {
        const char* sep = t.kind == K::And ? " /\\ " : " \\/ ";
        os << '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i) os << sep;
            os << printGuardedTerm(t.children[i]);
        }
        os << ')';
        break;
    }
    case K::Convex:
        os << '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i) os << " + ";
            os << printNumber(t.coeffs[i]) << '*' << printGuardedTerm(t.children[i]);
        }
        os << ')';
        break;
    case K::Modal:
        if (t.modality == "dia" || t.modality == "box")
            os << t.modality << ' ';
        else
            os << '<' << t.modality << '>';
        os << printGuardedTerm(t.children.front());
        break;
    }
    return os.str();
}

std::string formulaKey(const FormulaPtr& f) { return printFormula(f); }

} // namespace cofix
