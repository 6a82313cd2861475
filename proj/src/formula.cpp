#include "cofix/formula.hpp"

#include <algorithm>

namespace cofix {

namespace {
FormulaPtr mk(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
} // namespace

FormulaPtr fTop() {
    Formula f;
    f.kind = FormulaKind::Top;
    return mk(std::move(f));
}

FormulaPtr fBot() {
    Formula f;
    f.kind = FormulaKind::Bot;
    return mk(std::move(f));
}

FormulaPtr fAtom(std::string name) {
    Formula f;
    f.kind = FormulaKind::Atom;
    f.atom = std::move(name);
    return mk(std::move(f));
}

FormulaPtr fAnd(std::vector<FormulaPtr> children) {
    if (children.size() < 2) throw InternalError("And needs at least two children");
    Formula f;
    f.kind = FormulaKind::And;
    f.children = std::move(children);
    return mk(std::move(f));
}

FormulaPtr fOr(std::vector<FormulaPtr> children) {
    if (children.size() < 2) throw InternalError("Or needs at least two children");
    Formula f;
    f.kind = FormulaKind::Or;
    f.children = std::move(children);
    return mk(std::move(f));
}

FormulaPtr fNeg(FormulaPtr child) {
    Formula f;
    f.kind = FormulaKind::Neg;
    f.children = {std::move(child)};
    return mk(std::move(f));
}

FormulaPtr fConvex(std::vector<double> coeffs, std::vector<FormulaPtr> children) {
    if (coeffs.size() != children.size() || coeffs.empty())
        throw InternalError("Convex needs matching non-empty coefficient list");
    Formula f;
    f.kind = FormulaKind::Convex;
    f.coeffs = std::move(coeffs);
    f.children = std::move(children);
    return mk(std::move(f));
}

FormulaPtr fModal(std::string modality, FormulaPtr child) {
    Formula f;
    f.kind = FormulaKind::Modal;
    f.modality = std::move(modality);
    f.children = {std::move(child)};
    return mk(std::move(f));
}

FormulaPtr fDiamondStar(FormulaPtr child) {
    Formula f;
    f.kind = FormulaKind::Fix;
    f.fix = FixHead{FixKind::DiamondStar, std::nullopt, 0.0, nullptr};
    f.children = {std::move(child)};
    return mk(std::move(f));
}

FormulaPtr fProgramDiamond(Program program, FormulaPtr child) {
    Formula f;
    f.kind = FormulaKind::Fix;
    f.fix = FixHead{FixKind::ProgramDiamond, canonicalize(program), 0.0, nullptr};
    f.children = {std::move(child)};
    return mk(std::move(f));
}

FormulaPtr fSigmaQ(double q, FormulaPtr child) {
    Formula f;
    f.kind = FormulaKind::Fix;
    f.fix = FixHead{FixKind::SigmaQ, std::nullopt, q, nullptr};
    f.children = {std::move(child)};
    return mk(std::move(f));
}

FormulaPtr fSharp(SchemePtr scheme, std::vector<FormulaPtr> args) {
    Formula f;
    f.kind = FormulaKind::Fix;
    f.fix = FixHead{FixKind::Sharp, std::nullopt, 0.0, std::move(scheme)};
    f.children = std::move(args);
    return mk(std::move(f));
}

FormulaPtr fFlat(SchemePtr scheme, std::vector<FormulaPtr> args) {
    Formula f;
    f.kind = FormulaKind::Fix;
    f.fix = FixHead{FixKind::Flat, std::nullopt, 0.0, std::move(scheme)};
    f.children = std::move(args);
    return mk(std::move(f));
}

bool equal(const SchemeTerm& a, const SchemeTerm& b) {
    if (a.kind != b.kind || a.var != b.var || a.modality != b.modality ||
        a.applyFlat != b.applyFlat || a.children.size() != b.children.size())
        return false;
    if ((a.leaf == nullptr) != (b.leaf == nullptr)) return false;
    if (a.leaf && !equal(a.leaf, b.leaf)) return false;
    if ((a.scheme == nullptr) != (b.scheme == nullptr)) return false;
    if (a.scheme && !equal(*a.scheme, *b.scheme)) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!equal(a.children[i], b.children[i])) return false;
    return true;
}

bool equal(const FixpointScheme& a, const FixpointScheme& b) {
    return a.params == b.params && equal(a.body, b.body);
}

bool equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.atom != b.atom || a.modality != b.modality ||
        a.coeffs != b.coeffs || a.children.size() != b.children.size())
        return false;
    if (a.fix.has_value() != b.fix.has_value()) return false;
    if (a.fix) {
        if (a.fix->kind != b.fix->kind || a.fix->q != b.fix->q) return false;
        if (a.fix->program.has_value() != b.fix->program.has_value()) return false;
        if (a.fix->program && *a.fix->program != *b.fix->program) return false;
        if ((a.fix->scheme == nullptr) != (b.fix->scheme == nullptr)) return false;
        if (a.fix->scheme && !equal(*a.fix->scheme, *b.fix->scheme)) return false;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!equal(*a.children[i], *b.children[i])) return false;
    return true;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return equal(*a, *b);
}

GuardedTerm GuardedTerm::mkLeaf(FormulaPtr f) {
    GuardedTerm t;
    t.kind = Kind::Leaf;
    t.leaf = std::move(f);
    return t;
}

GuardedTerm GuardedTerm::mkBot() {
    GuardedTerm t;
    t.kind = Kind::Bot;
    return t;
}

GuardedTerm GuardedTerm::mkAnd(std::vector<GuardedTerm> cs) {
    if (cs.size() == 1) return std::move(cs.front());
    GuardedTerm t;
    t.kind = cs.empty() ? Kind::Top : Kind::And;
    t.children = std::move(cs);
    return t;
}

GuardedTerm GuardedTerm::mkOr(std::vector<GuardedTerm> cs) {
    if (cs.size() == 1) return std::move(cs.front());
    GuardedTerm t;
    t.kind = cs.empty() ? Kind::Bot : Kind::Or;
    t.children = std::move(cs);
    return t;
}

GuardedTerm GuardedTerm::mkConvex(std::vector<double> coeffs, std::vector<GuardedTerm> cs) {
    GuardedTerm t;
    t.kind = Kind::Convex;
    t.coeffs = std::move(coeffs);
    t.children = std::move(cs);
    return t;
}

GuardedTerm GuardedTerm::mkModal(std::string modality, std::vector<GuardedTerm> cs) {
    GuardedTerm t;
    t.kind = Kind::Modal;
    t.modality = std::move(modality);
    t.children = std::move(cs);
    return t;
}

void collectLeaves(const GuardedTerm& t, std::vector<FormulaPtr>& out) {
    if (t.kind == GuardedTerm::Kind::Leaf) {
        out.push_back(t.leaf);
        return;
    }
    for (const auto& c : t.children) collectLeaves(c, out);
}

std::string logicIdName(LogicId id) {
    switch (id) {
    case LogicId::DiamondStar: return "diamondstar";
    case LogicId::Pdl: return "pdl";
    case LogicId::Quant: return "quant";
    case LogicId::Cfl: return "cfl";
    }
    throw InternalError("unreachable logic id");
}

LogicId parseLogicId(const std::string& name) {
    if (name == "diamondstar") return LogicId::DiamondStar;
    if (name == "pdl") return LogicId::Pdl;
    if (name == "quant") return LogicId::Quant;
    if (name == "cfl") return LogicId::Cfl;
    throw UserError("unknown logic '" + name + "' (expected diamondstar|pdl|quant|cfl)");
}

LogicInstance LogicInstance::diamondStar() {
    LogicInstance li;
    li.id = LogicId::DiamondStar;
    li.modalities = {{"dia", {1, "box"}}, {"box", {1, "dia"}}};
    return li;
}

LogicInstance LogicInstance::pdl(std::vector<std::string> alphabet) {
    LogicInstance li;
    li.id = LogicId::Pdl;
    for (const auto& label : alphabet) li.modalities.emplace(label, ModalitySig{1, ""});
    li.programAlphabet = std::move(alphabet);
    return li;
}

LogicInstance LogicInstance::quant() {
    LogicInstance li;
    li.id = LogicId::Quant;
    li.modalities = {{"dia", {1, ""}}};
    return li;
}

LogicInstance LogicInstance::cfl() {
    LogicInstance li;
    li.id = LogicId::Cfl;
    li.modalities = {{"dia", {1, "box"}}, {"box", {1, "dia"}}};
    return li;
}

std::string LogicInstance::dualOf(const std::string& name) const {
    auto it = modalities.find(name);
    if (it == modalities.end() || it->second.dual.empty())
        throw UserError("modality '" + name + "' has no declared dual");
    return it->second.dual;
}

} // namespace cofix
