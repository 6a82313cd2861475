#include "cofix/schemes.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cofix/printer.hpp"

namespace cofix {

namespace {

bool walkGuarded(const SchemeTerm& t, bool guarded, std::vector<int>& path, GuardedCheck& out) {
    switch (t.kind) {
    case SchemeTermKind::FixVar:
        if (!guarded) {
            out = {false, path, "fixpoint variable outside every one-step modality"};
            return false;
        }
        return true;
    case SchemeTermKind::Apply: {
        if (!guarded) {
            out = {false, path, "nested fixpoint application outside every one-step modality"};
            return false;
        }
        std::vector<int> fresh;
        if (!walkGuarded(t.scheme->body, false, fresh, out)) return false;
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            if (!walkGuarded(t.children[i], true, path, out)) return false;
            path.pop_back();
        }
        return true;
    }
    case SchemeTermKind::Modal:
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            if (!walkGuarded(t.children[i], true, path, out)) return false;
            path.pop_back();
        }
        return true;
    case SchemeTermKind::And:
    case SchemeTermKind::Or:
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            path.push_back(static_cast<int>(i));
            if (!walkGuarded(t.children[i], guarded, path, out)) return false;
            path.pop_back();
        }
        return true;
    default:
        return true;
    }
}

} // namespace

GuardedCheck checkGuarded(const FixpointScheme& scheme) {
    GuardedCheck out;
    std::vector<int> path;
    walkGuarded(scheme.body, false, path, out);
    return out;
}

namespace {

struct Substituter {
    std::map<std::string, FormulaPtr> env;
    FormulaPtr self;

    FormulaPtr termToFormula(const SchemeTerm& t) const {
        switch (t.kind) {
        case SchemeTermKind::Var: {
            auto it = env.find(t.var);
            if (it == env.end()) throw UserError("missing argument for variable '" + t.var + "'");
            return it->second;
        }
        case SchemeTermKind::FixVar: return self;
        case SchemeTermKind::Leaf: return t.leaf;
        case SchemeTermKind::Top: return fTop();
        case SchemeTermKind::Bot: return fBot();
        case SchemeTermKind::And:
        case SchemeTermKind::Or: {
            std::vector<FormulaPtr> cs;
            for (const auto& c : t.children) cs.push_back(termToFormula(c));
            if (cs.size() == 1) return cs.front();
            return t.kind == SchemeTermKind::And ? fAnd(std::move(cs)) : fOr(std::move(cs));
        }
        case SchemeTermKind::Modal: return fModal(t.modality, termToFormula(t.children.front()));
        case SchemeTermKind::Apply: return applyToFormula(t);
        }
        throw InternalError("unreachable scheme term kind");
    }

    FormulaPtr applyToFormula(const SchemeTerm& t) const {
        std::vector<FormulaPtr> args;
        for (const auto& arg : t.children) args.push_back(termToFormula(arg));
        return t.applyFlat ? fFlat(t.scheme, std::move(args)) : fSharp(t.scheme, std::move(args));
    }

    GuardedTerm walk(const SchemeTerm& t) const {
        switch (t.kind) {
        case SchemeTermKind::Var:
        case SchemeTermKind::FixVar:
        case SchemeTermKind::Leaf:
            return GuardedTerm::mkLeaf(termToFormula(t));
        case SchemeTermKind::Top: return GuardedTerm::mkTop();
        case SchemeTermKind::Bot: return GuardedTerm::mkBot();
        case SchemeTermKind::And:
        case SchemeTermKind::Or: {
            std::vector<GuardedTerm> cs;
            for (const auto& c : t.children) cs.push_back(walk(c));
            return t.kind == SchemeTermKind::And ? GuardedTerm::mkAnd(std::move(cs))
                                                 : GuardedTerm::mkOr(std::move(cs));
        }
        case SchemeTermKind::Modal: {
            std::vector<GuardedTerm> cs;
            for (const auto& c : t.children) cs.push_back(walk(c));
            return GuardedTerm::mkModal(t.modality, std::move(cs));
        }
        case SchemeTermKind::Apply:
            return GuardedTerm::mkLeaf(applyToFormula(t));
        }
        throw InternalError("unreachable scheme term kind");
    }
};

} // namespace

GuardedTerm substitute(const FixpointScheme& scheme, const std::vector<FormulaPtr>& args,
                       const FormulaPtr& self) {
    auto check = checkGuarded(scheme);
    if (!check.ok) throw UserError("unguarded scheme: " + check.reason);
    if (args.size() != scheme.params.size())
        throw UserError("scheme expects " + std::to_string(scheme.params.size()) +
                        " arguments, got " + std::to_string(args.size()));
    Substituter sub;
    for (std::size_t i = 0; i < args.size(); ++i) sub.env.emplace(scheme.params[i], args[i]);
    sub.self = self;
    return sub.walk(scheme.body);
}

namespace {

FormulaPtr negateClosed(const FormulaPtr& f) {
    if (f->kind == FormulaKind::Neg) return f->children.front();
    if (f->kind == FormulaKind::Top) return fBot();
    if (f->kind == FormulaKind::Bot) return fTop();
    return fNeg(f);
}

SchemeTerm dualizeTerm(const SchemeTerm& t, const LogicInstance& instance) {
    SchemeTerm out = t;
    switch (t.kind) {
    case SchemeTermKind::Var:
    case SchemeTermKind::FixVar:
        return out;
    case SchemeTermKind::Leaf:
        out.leaf = negateClosed(t.leaf);
        return out;
    case SchemeTermKind::Top:
        out.kind = SchemeTermKind::Bot;
        return out;
    case SchemeTermKind::Bot:
        out.kind = SchemeTermKind::Top;
        return out;
    case SchemeTermKind::And:
    case SchemeTermKind::Or:
        out.kind = t.kind == SchemeTermKind::And ? SchemeTermKind::Or : SchemeTermKind::And;
        for (auto& c : out.children) c = dualizeTerm(c, instance);
        return out;
    case SchemeTermKind::Modal:
        out.modality = instance.dualOf(t.modality);
        for (auto& c : out.children) c = dualizeTerm(c, instance);
        return out;
    case SchemeTermKind::Apply: {
        auto dual = std::make_shared<FixpointScheme>(dualize(*t.scheme, instance));
        out.scheme = std::move(dual);
        out.applyFlat = !t.applyFlat;
        for (auto& c : out.children) c = dualizeTerm(c, instance);
        return out;
    }
    }
    throw InternalError("unreachable scheme term kind");
}

} // namespace

FixpointScheme dualize(const FixpointScheme& scheme, const LogicInstance& instance) {
    FixpointScheme out;
    out.params = scheme.params;
    out.body = dualizeTerm(scheme.body, instance);
    return out;
}

FormulaPtr dualRewrite(const Formula& flatFormula, const LogicInstance& instance) {
    if (flatFormula.kind != FormulaKind::Fix || flatFormula.fix->kind != FixKind::Flat)
        throw InternalError("dualRewrite expects a flat application");
    auto dual = std::make_shared<FixpointScheme>(dualize(*flatFormula.fix->scheme, instance));
    std::vector<FormulaPtr> negArgs;
    for (const auto& arg : flatFormula.children) negArgs.push_back(negateClosed(arg));
    return fNeg(fSharp(std::move(dual), std::move(negArgs)));
}

// ---- mu-calculus translation ---------------------------------------------

namespace {

void checkMuGuardedWalk(const MuPtr& f, std::set<std::string> pending) {
    switch (f->kind) {
    case MuFormula::Kind::Var:
        if (pending.count(f->name))
            throw UserError("unguarded bound variable '" + f->name + "'");
        return;
    case MuFormula::Kind::Modal:
        checkMuGuardedWalk(f->children.front(), {});
        return;
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu: {
        pending.insert(f->name);
        checkMuGuardedWalk(f->children.front(), pending);
        return;
    }
    default:
        for (const auto& c : f->children) checkMuGuardedWalk(c, pending);
    }
}

void checkAlternationFree(const MuPtr& f, std::set<std::string> muVars,
                          std::set<std::string> nuVars) {
    if (f->kind == MuFormula::Kind::Mu || f->kind == MuFormula::Kind::Nu) {
        const auto& opposite = f->kind == MuFormula::Kind::Mu ? nuVars : muVars;
        for (const auto& v : freeVars(f->children.front()))
            if (opposite.count(v))
                throw UserError("alternation detected: '" + v + "' crosses a " +
                                (f->kind == MuFormula::Kind::Mu ? "mu" : "nu") + " binder");
        (f->kind == MuFormula::Kind::Mu ? muVars : nuVars).insert(f->name);
        checkAlternationFree(f->children.front(), muVars, nuVars);
        return;
    }
    if (f->kind == MuFormula::Kind::Neg) {
        if (!freeVars(f->children.front()).empty())
            throw UserError("negation over a non-closed subformula");
    }
    for (const auto& c : f->children) checkAlternationFree(c, muVars, nuVars);
}

void collectAtoms(const MuPtr& f, std::set<std::string>& out) {
    if (f->kind == MuFormula::Kind::Atom) out.insert(f->name);
    for (const auto& c : f->children) collectAtoms(c, out);
}

struct MuTranslator {
    const LogicInstance& instance;

    FormulaPtr formula(const MuPtr& f) const {
        switch (f->kind) {
        case MuFormula::Kind::Top: return fTop();
        case MuFormula::Kind::Bot: return fBot();
        case MuFormula::Kind::Atom: return fAtom(f->name);
        case MuFormula::Kind::Var:
            throw InternalError("free variable '" + f->name + "' at formula level");
        case MuFormula::Kind::And:
        case MuFormula::Kind::Or: {
            std::vector<FormulaPtr> cs;
            for (const auto& c : f->children) cs.push_back(formula(c));
            return f->kind == MuFormula::Kind::And ? fAnd(std::move(cs)) : fOr(std::move(cs));
        }
        case MuFormula::Kind::Neg: return fNeg(formula(f->children.front()));
        case MuFormula::Kind::Modal: return fModal(f->modality, formula(f->children.front()));
        case MuFormula::Kind::Mu:
        case MuFormula::Kind::Nu: {
            // A binder at formula level is closed, so the scheme has no
            // parameters.
            auto [scheme, args] = buildScheme(f, {});
            return f->kind == MuFormula::Kind::Mu ? fSharp(scheme, {}) : fFlat(scheme, {});
        }
        }
        throw InternalError("unreachable mu formula kind");
    }

    // env maps in-scope mu-variables to their scheme-term representation.
    // Returns the scheme together with the application arguments (the
    // representations of the outer variables it closes over).
    std::pair<SchemePtr, std::vector<SchemeTerm>> buildScheme(
        const MuPtr& binder, const std::map<std::string, SchemeTerm>& outerEnv) const {
        const MuPtr& body = binder->children.front();
        std::vector<std::string> outers;
        for (const auto& v : freeVars(body))
            if (v != binder->name) outers.push_back(v);

        std::set<std::string> atoms;
        collectAtoms(body, atoms);
        std::vector<std::string> paramNames;
        auto freshParam = [&]() {
            static const char* candidates[] = {"v", "w", "u"};
            for (const char* c : candidates)
                if (!atoms.count(c) &&
                    std::find(paramNames.begin(), paramNames.end(), c) == paramNames.end())
                    return std::string(c);
            for (int i = 1;; ++i) {
                std::string name = "v" + std::to_string(i);
                if (!atoms.count(name) &&
                    std::find(paramNames.begin(), paramNames.end(), name) == paramNames.end())
                    return name;
            }
        };

        std::map<std::string, SchemeTerm> env;
        std::vector<SchemeTerm> args;
        for (const auto& outer : outers) {
            paramNames.push_back(freshParam());
            SchemeTerm var;
            var.kind = SchemeTermKind::Var;
            var.var = paramNames.back();
            env.emplace(outer, std::move(var));
            args.push_back(outerEnv.at(outer));
        }
        SchemeTerm fixVar;
        fixVar.kind = SchemeTermKind::FixVar;
        env[binder->name] = fixVar;

        auto scheme = std::make_shared<FixpointScheme>();
        scheme->params = paramNames;
        scheme->body = term(body, env, false);
        return {scheme, std::move(args)};
    }

    SchemeTerm term(const MuPtr& f, const std::map<std::string, SchemeTerm>& env, bool guarded) const {
        SchemeTerm t;
        switch (f->kind) {
        case MuFormula::Kind::Top:
            t.kind = SchemeTermKind::Top;
            return t;
        case MuFormula::Kind::Bot:
            t.kind = SchemeTermKind::Bot;
            return t;
        case MuFormula::Kind::Atom:
            t.kind = SchemeTermKind::Leaf;
            t.leaf = fAtom(f->name);
            return t;
        case MuFormula::Kind::Var: {
            auto it = env.find(f->name);
            if (it == env.end()) throw InternalError("unbound variable '" + f->name + "'");
            return it->second;
        }
        case MuFormula::Kind::And:
        case MuFormula::Kind::Or:
            t.kind = f->kind == MuFormula::Kind::And ? SchemeTermKind::And : SchemeTermKind::Or;
            for (const auto& c : f->children) t.children.push_back(term(c, env, guarded));
            return t;
        case MuFormula::Kind::Neg:
            // Pre-checked closed, so this drops to the formula translation.
            t.kind = SchemeTermKind::Leaf;
            t.leaf = fNeg(formula(f->children.front()));
            return t;
        case MuFormula::Kind::Modal:
            t.kind = SchemeTermKind::Modal;
            t.modality = f->modality;
            t.children.push_back(term(f->children.front(), env, true));
            return t;
        case MuFormula::Kind::Mu:
        case MuFormula::Kind::Nu: {
            auto [scheme, args] = buildScheme(f, env);
            SchemeTerm apply;
            apply.kind = SchemeTermKind::Apply;
            apply.scheme = scheme;
            apply.children = std::move(args);
            apply.applyFlat = f->kind == MuFormula::Kind::Nu;
            if (guarded) return apply;
            // Unguarded binder occurrence: splice in its body once, with the
            // recursive occurrences becoming the (now guarded) application.
            auto inner = env;
            inner[f->name] = apply;
            return term(f->children.front(), inner, guarded);
        }
        }
        throw InternalError("unreachable mu formula kind");
    }
};

} // namespace

FormulaPtr translateMu(const MuPtr& muFormula, const LogicInstance& instance) {
    if (instance.id != LogicId::Cfl)
        throw UserError("translateMu targets the cfl instance");
    if (!freeVars(muFormula).empty())
        throw UserError("translateMu needs a closed formula");
    checkMuGuardedWalk(muFormula, {});
    checkAlternationFree(muFormula, {}, {});
    MuTranslator tr{instance};
    FormulaPtr out = tr.formula(muFormula);
    auto diags = validate(out, instance);
    if (!diags.empty())
        throw InternalError("translateMu produced an invalid formula: " + diags.front().message);
    return out;
}

} // namespace cofix
