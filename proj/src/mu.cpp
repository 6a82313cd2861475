#include "cofix/mu.hpp"

#include <algorithm>
#include <sstream>

namespace cofix {

namespace {
MuPtr mk(MuFormula f) { return std::make_shared<const MuFormula>(std::move(f)); }
} // namespace

MuPtr MuFormula::top() { return mk({Kind::Top, {}, {}, {}}); }
MuPtr MuFormula::bot() { return mk({Kind::Bot, {}, {}, {}}); }
MuPtr MuFormula::atom(std::string name) { return mk({Kind::Atom, std::move(name), {}, {}}); }
MuPtr MuFormula::var(std::string name) { return mk({Kind::Var, std::move(name), {}, {}}); }

MuPtr MuFormula::mkAnd(std::vector<MuPtr> cs) {
    if (cs.size() < 2) throw InternalError("And needs at least two children");
    return mk({Kind::And, {}, {}, std::move(cs)});
}

MuPtr MuFormula::mkOr(std::vector<MuPtr> cs) {
    if (cs.size() < 2) throw InternalError("Or needs at least two children");
    return mk({Kind::Or, {}, {}, std::move(cs)});
}

MuPtr MuFormula::neg(MuPtr c) { return mk({Kind::Neg, {}, {}, {std::move(c)}}); }

MuPtr MuFormula::modal(std::string m, MuPtr c) {
    return mk({Kind::Modal, {}, std::move(m), {std::move(c)}});
}

MuPtr MuFormula::mu(std::string v, MuPtr body) {
    return mk({Kind::Mu, std::move(v), {}, {std::move(body)}});
}

MuPtr MuFormula::nu(std::string v, MuPtr body) {
    return mk({Kind::Nu, std::move(v), {}, {std::move(body)}});
}

namespace {
void collectFree(const MuPtr& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
    switch (f->kind) {
    case MuFormula::Kind::Var:
        if (std::find(bound.begin(), bound.end(), f->name) == bound.end() &&
            std::find(out.begin(), out.end(), f->name) == out.end())
            out.push_back(f->name);
        return;
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu:
        bound.push_back(f->name);
        collectFree(f->children.front(), bound, out);
        bound.pop_back();
        return;
    default:
        for (const auto& c : f->children) collectFree(c, bound, out);
    }
}

void printAt(std::ostringstream& os, const MuPtr& f, int parent) {
    auto wrap = [&](int mine, auto body) {
        bool parens = mine < parent;
        if (parens) os << '(';
        body();
        if (parens) os << ')';
    };
    switch (f->kind) {
    case MuFormula::Kind::Top: os << 'T'; return;
    case MuFormula::Kind::Bot: os << 'F'; return;
    case MuFormula::Kind::Atom:
    case MuFormula::Kind::Var: os << f->name; return;
    case MuFormula::Kind::And:
        wrap(2, [&] {
            for (std::size_t i = 0; i < f->children.size(); ++i) {
                if (i) os << " /\\ ";
                printAt(os, f->children[i], 3);
            }
        });
        return;
    case MuFormula::Kind::Or:
        wrap(1, [&] {
            for (std::size_t i = 0; i < f->children.size(); ++i) {
                if (i) os << " \\/ ";
                printAt(os, f->children[i], 2);
            }
        });
        return;
    case MuFormula::Kind::Neg:
        wrap(3, [&] {
            os << '~';
            printAt(os, f->children.front(), 3);
        });
        return;
    case MuFormula::Kind::Modal:
        wrap(3, [&] {
            os << f->modality << ' ';
            printAt(os, f->children.front(), 3);
        });
        return;
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu:
        // Binders reach as far right as possible, so they never need inner
        // parens, only outer ones when embedded.
        wrap(1, [&] {
            os << (f->kind == MuFormula::Kind::Mu ? "mu " : "nu ") << f->name << ". ";
            printAt(os, f->children.front(), 0);
        });
        return;
    }
}
} // namespace

std::vector<std::string> freeVars(const MuPtr& f) {
    std::vector<std::string> bound, out;
    collectFree(f, bound, out);
    return out;
}

std::string printMuFormula(const MuPtr& f) {
    std::ostringstream os;
    printAt(os, f, 0);
    return os.str();
}

} // namespace cofix
